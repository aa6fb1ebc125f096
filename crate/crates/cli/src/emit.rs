use std::fmt::Write;
use std::str::FromStr;

use decomposable::engine::Action;

use crate::error::{CliError, Result};
use crate::manifest::RunManifest;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Dot,
    TsvTrace,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "dot" => Ok(Self::Dot),
            "tsv-trace" => Ok(Self::TsvTrace),
            other => Err(CliError::UnknownFormat(other.to_owned())),
        }
    }
}

pub fn emit(manifest: &RunManifest, format: Format) -> Result<Vec<u8>> {
    Ok(match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(manifest)?;
            out.push(b'\n');
            out
        }
        Format::Dot => dot(manifest).into_bytes(),
        Format::TsvTrace => tsv_trace(manifest).into_bytes(),
    })
}

fn dot(m: &RunManifest) -> String {
    let mut s = String::from("graph model {\n");
    for (i, c) in m.columns.iter().enumerate() {
        let label = c.name.replace('\\', "\\\\").replace('"', "\\\"");
        let _ = writeln!(s, "  v{i} [label=\"{label}\"];");
    }
    for (a, b) in &m.model.edges {
        let _ = writeln!(s, "  v{a} -- v{b};");
    }
    s.push_str("}\n");
    s
}

fn tsv_trace(m: &RunManifest) -> String {
    let mut s = String::from("step\taction\tv_a\tv_b\tseparator\tdelta\tentropies_computed\tH_model\n");
    for r in &m.steps {
        let action = match r.action {
            Action::Add => "add",
            Action::Delete => "delete",
        };
        let _ = writeln!(
            s,
            "{}\t{action}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.step, r.v_a, r.v_b, r.separator, r.delta, r.entropies_computed, r.h_model
        );
    }
    s
}

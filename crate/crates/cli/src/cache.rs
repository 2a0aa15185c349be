//! Persisted constant cache.
//!
//! Derived constants are expensive only at extreme precision, but callers
//! may still want them pinned to disk for reproducibility audits. A cache
//! is usable when it carries at least the working precision requested,
//! was written by this tool version, and its checksum of the exact
//! algebraic inputs matches the binary's own.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use pi_forge_core::constants::{checksum_source_text, DerivedConstantSet};
use pi_forge_core::{BigReal, PrecisionContext};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

const MEMBER_NAMES: [&str; 6] = [
    "j_3315",
    "x_3315",
    "lambda_star_3315",
    "alpha_3315",
    "lambda_star_13260",
    "alpha_13260",
];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstantCacheFile {
    pub precision_digits: usize,
    pub constants: BTreeMap<String, String>,
    pub tool_version: String,
    pub paper_constants_checksum: String,
}

/// Hex SHA-256 of the canonical algebraic-input text.
pub fn checksum() -> String {
    hex::encode(Sha256::digest(checksum_source_text().as_bytes()))
}

impl ConstantCacheFile {
    /// Render a derived set to decimal strings carrying the full working
    /// precision of `ctx`.
    pub fn build(set: &DerivedConstantSet, ctx: &PrecisionContext) -> anyhow::Result<Self> {
        let sig = ctx.working_digits();
        let members = [
            &set.j_3315,
            &set.x_3315,
            &set.lambda_star_3315,
            &set.alpha_3315,
            &set.lambda_star_13260,
            &set.alpha_13260,
        ];
        let mut constants = BTreeMap::new();
        for (name, value) in MEMBER_NAMES.iter().zip(members) {
            constants.insert(
                name.to_string(),
                value
                    .to_decimal_sig(sig)
                    .with_context(|| format!("rendering {name}"))?,
            );
        }
        Ok(Self {
            precision_digits: sig,
            constants,
            tool_version: TOOL_VERSION.to_string(),
            paper_constants_checksum: checksum(),
        })
    }

    /// A cache satisfies a request only at equal or higher precision and
    /// only when version and checksum both match.
    pub fn usable(&self, working_digits: usize) -> bool {
        self.precision_digits >= working_digits
            && self.tool_version == TOOL_VERSION
            && self.paper_constants_checksum == checksum()
            && MEMBER_NAMES.iter().all(|n| self.constants.contains_key(*n))
    }

    /// Reparse the stored strings at the precision of `ctx`.
    pub fn restore(&self, ctx: &PrecisionContext) -> anyhow::Result<DerivedConstantSet> {
        let get = |name: &str| -> anyhow::Result<BigReal> {
            let s = self
                .constants
                .get(name)
                .with_context(|| format!("cache is missing {name}"))?;
            BigReal::parse_decimal(s, ctx).with_context(|| format!("cache entry {name}"))
        };
        Ok(DerivedConstantSet {
            j_3315: get("j_3315")?,
            x_3315: get("x_3315")?,
            lambda_star_3315: get("lambda_star_3315")?,
            alpha_3315: get("alpha_3315")?,
            lambda_star_13260: get("lambda_star_13260")?,
            alpha_13260: get("alpha_13260")?,
            precision: self.precision_digits.min(ctx.working_digits()),
        })
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading constant cache {}", path.display()))?;
        let file: Self = serde_json::from_str(&text)
            .with_context(|| format!("parsing constant cache {}", path.display()))?;
        if file.precision_digits == 0 {
            bail!("constant cache {} declares zero precision", path.display());
        }
        Ok(file)
    }

    /// Write through a process-unique temporary so a concurrent reader
    /// never observes a half-written cache.
    pub fn store(&self, path: &Path) -> anyhow::Result<()> {
        let mut text = serde_json::to_string_pretty(self).context("encoding constant cache")?;
        text.push('\n');
        let file_name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "constants".to_string());
        let tmp = path.with_file_name(format!(".{file_name}.{}.tmp", std::process::id()));
        fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
        fs::rename(&tmp, path)
            .with_context(|| format!("installing constant cache {}", path.display()))?;
        Ok(())
    }
}

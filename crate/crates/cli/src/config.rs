use std::collections::BTreeMap;
use std::path::Path;

use qq_core::quiver::{default_height, DynkinQuiver, DynkinType};
use qq_core::Context;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// `{"type":"A","rank":4,"arrows":[[1,2],[2,3],[4,3]],"xi":{"1":1}}`
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverConfig {
    #[serde(rename = "type")]
    pub kind: String,
    pub rank: usize,
    pub arrows: Vec<(usize, usize)>,
    #[serde(default)]
    pub xi: Option<BTreeMap<String, i32>>,
}

impl QuiverConfig {
    /// Parse inline JSON, or read the file at `arg` when it is not JSON.
    pub fn load(arg: &str) -> CliResult<Self> {
        let text =
            if arg.trim_start().starts_with('{') { arg.to_string() } else { std::fs::read_to_string(Path::new(arg))? };
        Ok(serde_json::from_str(&text)?)
    }

    pub fn quiver(&self) -> CliResult<DynkinQuiver> {
        let kind: DynkinType = self.kind.parse()?;
        Ok(DynkinQuiver::new(kind, self.rank, &self.arrows)?)
    }

    pub fn context(&self) -> CliResult<Context> {
        let q = self.quiver()?;
        let Some(xi) = &self.xi else {
            return Ok(Context::new(q)?);
        };
        let mut pinned = BTreeMap::new();
        for (k, v) in xi {
            let i: usize = k.trim().parse().map_err(|_| CliError::Input(format!("xi key {k:?} is not a vertex")))?;
            if !q.vertices().any(|j| j == i) {
                return Err(qq_core::Error::UnknownVertex(i).into());
            }
            pinned.insert(i, *v);
        }
        let anchor = pinned.iter().next().map(|(i, v)| (*i, *v));
        let height = default_height(&q, anchor)?;
        for (i, v) in &pinned {
            if height.get(*i) != *v {
                return Err(CliError::Input(format!("xi({i}) = {v} is inconsistent with the arrows")));
            }
        }
        Ok(Context::with_height(q, height))
    }
}

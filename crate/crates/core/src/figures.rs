//! The fifteen committed figure panel configurations.
//!
//! Panels 01-03 belong to figure 4, 04-06 to figure 5, 07-09 to figure 6,
//! 10-12 to figure 7 and 13-15 to figure 8.

use crate::config::Config;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Panel {
    pub id: u32,
    pub figure: u32,
    pub json: &'static str,
}

impl Panel {
    pub fn name(&self) -> String {
        format!("fig{}-{:02}", self.figure, self.id)
    }

    pub fn config(&self) -> Result<Config> {
        Config::from_json(self.json)
    }
}

macro_rules! panel {
    ($id:literal, $fig:literal, $file:literal) => {
        Panel {
            id: $id,
            figure: $fig,
            json: include_str!(concat!("../figures/", $file)),
        }
    };
}

pub const PANELS: [Panel; 15] = [
    panel!(1, 4, "panel-01.json"),
    panel!(2, 4, "panel-02.json"),
    panel!(3, 4, "panel-03.json"),
    panel!(4, 5, "panel-04.json"),
    panel!(5, 5, "panel-05.json"),
    panel!(6, 5, "panel-06.json"),
    panel!(7, 6, "panel-07.json"),
    panel!(8, 6, "panel-08.json"),
    panel!(9, 6, "panel-09.json"),
    panel!(10, 7, "panel-10.json"),
    panel!(11, 7, "panel-11.json"),
    panel!(12, 7, "panel-12.json"),
    panel!(13, 8, "panel-13.json"),
    panel!(14, 8, "panel-14.json"),
    panel!(15, 8, "panel-15.json"),
];

pub fn panel(id: u32) -> Option<&'static Panel> {
    PANELS.iter().find(|p| p.id == id)
}

/// Resolves `all`, `figN` (every panel of a figure), `figN-MM`, `panel-MM` or `MM`.
///
/// In `figN-MM` the panel number decides; a figure number that does not
/// match the panel is accepted so that either numbering of the figures works.
pub fn select(spec: &str) -> Result<Vec<&'static Panel>> {
    let unknown = || Error::InvalidConfig(format!("unknown panel selector {spec:?}"));
    let spec = spec.trim().to_ascii_lowercase();
    if spec == "all" {
        return Ok(PANELS.iter().collect());
    }
    let id_part = if let Some(rest) = spec.strip_prefix("fig") {
        match rest.split_once('-') {
            Some((_, id)) => id.to_string(),
            None => {
                let fig: u32 = rest.parse().map_err(|_| unknown())?;
                let found: Vec<_> = PANELS.iter().filter(|p| p.figure == fig).collect();
                return if found.is_empty() {
                    Err(unknown())
                } else {
                    Ok(found)
                };
            }
        }
    } else {
        spec.strip_prefix("panel-").unwrap_or(&spec).to_string()
    };
    let id: u32 = id_part.parse().map_err(|_| unknown())?;
    panel(id).map(|p| vec![p]).ok_or_else(unknown)
}

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use locrep::chartab::DEFAULT_CHARTAB_CAP;
use locrep::group::{parse_group, DEFAULT_TABLE_CAP};
use locrep::{Error, GroupSpec, Result, Ring, RingDesc, RingElem};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    Verify,
    Gl2Sl2Tables,
    Branching,
    Chartab,
    Classes,
}

impl Subcommand {
    pub fn name(&self) -> &'static str {
        match self {
            Subcommand::Verify => "verify",
            Subcommand::Gl2Sl2Tables => "gl2-sl2-tables",
            Subcommand::Branching => "branching",
            Subcommand::Chartab => "chartab",
            Subcommand::Classes => "classes",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitSelection {
    One(u32),
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub table: u64,
    pub chartab: u64,
    /// 0 means the rayon default.
    pub threads: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { table: DEFAULT_TABLE_CAP, chartab: DEFAULT_CHARTAB_CAP, threads: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobConfig {
    pub subcommand: Subcommand,
    pub group: String,
    pub ring: String,
    pub units: UnitSelection,
    pub caps: Caps,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
    pub timings: bool,
}

impl JobConfig {
    pub fn new(subcommand: Subcommand, group: &str, ring: &str) -> Self {
        JobConfig {
            subcommand,
            group: group.to_string(),
            ring: ring.to_string(),
            units: UnitSelection::One(1),
            caps: Caps::default(),
            out: None,
            format: Format::Text,
            cache_dir: None,
            timings: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.caps.table == 0 || self.caps.chartab == 0 {
            return Err(Error::UnsupportedRing("caps must be positive".into()));
        }
        parse_group(&self.group)?;
        self.ring.parse::<RingDesc>()?;
        Ok(())
    }

    pub fn spec(&self) -> Result<GroupSpec> {
        GroupSpec::parse(&self.group, &self.ring)
    }

    /// The selected units of the ring, in increasing order.
    pub fn selected_units(&self, ring: &Ring) -> Result<Vec<RingElem>> {
        match self.units {
            UnitSelection::All => Ok(ring.units().collect()),
            UnitSelection::One(a) => {
                if a >= ring.order() || !ring.is_unit(RingElem(a)) {
                    return Err(Error::NotUnit(a));
                }
                Ok(vec![RingElem(a)])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_roundtrips() {
        let mut c = JobConfig::new(Subcommand::Gl2Sl2Tables, "GL2", "equal:3^2");
        c.units = UnitSelection::All;
        c.cache_dir = Some("/tmp/x".into());
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<JobConfig>(&s).unwrap(), c);
        assert!(s.contains("\"gl2-sl2-tables\""));
    }

    #[test]
    fn validation() {
        let mut c = JobConfig::new(Subcommand::Verify, "GL2", "mixed:2^2");
        assert!(c.validate().is_ok());
        c.caps.table = 0;
        assert!(c.validate().is_err());
        let c = JobConfig::new(Subcommand::Verify, "XL2", "mixed:2^2");
        assert!(c.validate().is_err());
        let ring = Ring::new("mixed:2^2".parse().unwrap());
        let mut c = JobConfig::new(Subcommand::Verify, "GL2", "mixed:2^2");
        c.units = UnitSelection::One(2);
        assert!(c.selected_units(&ring).is_err());
        c.units = UnitSelection::All;
        assert_eq!(c.selected_units(&ring).unwrap(), vec![RingElem(1), RingElem(3)]);
    }
}

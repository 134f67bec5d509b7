//! The six published table settings.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::archimedean::{Family, Generator};
use crate::error::{Error, Result};
use crate::estimators::{Mode, TailProblem};
use crate::marginals::{Marginal, ParetoMarginal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Table1,
    Table2,
    Table3,
    Table4,
    Table5,
    Table6,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Table1,
        Preset::Table2,
        Preset::Table3,
        Preset::Table4,
        Preset::Table5,
        Preset::Table6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Table1 => "table1",
            Preset::Table2 => "table2",
            Preset::Table3 => "table3",
            Preset::Table4 => "table4",
            Preset::Table5 => "table5",
            Preset::Table6 => "table6",
        }
    }

    /// Grid exponent used for the deterministic bounds, if the table has them.
    pub fn default_m(self) -> Option<u32> {
        match self {
            Preset::Table1 | Preset::Table3 => Some(20),
            Preset::Table2 | Preset::Table4 => Some(8),
            Preset::Table5 | Preset::Table6 => None,
        }
    }

    pub fn scenarios(self) -> Vec<Scenario> {
        let small = vec![1.0, 1e2, 1e4, 1e6];
        let survival = vec![1.0, 1e2, 1e3, 1e4];
        match self {
            Preset::Table1 => vec![Scenario::new(
                "clayton",
                Mode::CopulaX,
                Family::Clayton,
                3.0 / 8.0,
                vec![0.9, 1.8],
                small,
            )],
            Preset::Table2 => vec![Scenario::new(
                "clayton",
                Mode::CopulaX,
                Family::Clayton,
                1.0 / 6.0,
                vec![0.9, 1.8, 2.6],
                small,
            )],
            Preset::Table3 => vec![Scenario::new(
                "survival clayton",
                Mode::SurvivalY,
                Family::Clayton,
                0.5,
                vec![2.5; 2],
                survival,
            )],
            Preset::Table4 => vec![Scenario::new(
                "survival clayton",
                Mode::SurvivalY,
                Family::Clayton,
                0.5,
                vec![2.5; 3],
                survival,
            )],
            Preset::Table5 => high_dim(20.0),
            Preset::Table6 => high_dim(200.0),
        }
    }
}

fn high_dim(s: f64) -> Vec<Scenario> {
    let blocks = [
        ("clayton", Mode::CopulaX, Family::Clayton),
        ("gumbel", Mode::CopulaX, Family::Gumbel),
        ("survival clayton", Mode::SurvivalY, Family::Clayton),
        ("survival gumbel", Mode::SurvivalY, Family::Gumbel),
    ];
    let mut out = Vec::new();
    for (label, mode, family) in blocks {
        for tau in [0.1, 0.5, 0.9] {
            out.push(Scenario::new(label, mode, family, tau, vec![2.5; 5], vec![s]));
        }
    }
    out
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown preset `{s}` (table1 to table6)")))
    }
}

/// One dependence setting of a table, evaluated at each listed threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub family_label: &'static str,
    pub mode: Mode,
    pub family: Family,
    pub tau: f64,
    pub alphas: Vec<f64>,
    pub s_values: Vec<f64>,
}

impl Scenario {
    fn new(
        family_label: &'static str,
        mode: Mode,
        family: Family,
        tau: f64,
        alphas: Vec<f64>,
        s_values: Vec<f64>,
    ) -> Self {
        Self { family_label, mode, family, tau, alphas, s_values }
    }

    /// Row label such as `survival gumbel tau=0.5`.
    pub fn label(&self) -> String {
        format!("{} tau={}", self.family_label, self.tau)
    }

    pub fn generator(&self) -> Result<Generator> {
        Generator::from_tau(self.family, self.tau)
    }

    pub fn marginals(&self) -> Result<Vec<Arc<dyn Marginal>>> {
        self.alphas
            .iter()
            .map(|&a| Ok(Arc::new(ParetoMarginal::new(a)?) as Arc<dyn Marginal>))
            .collect()
    }

    pub fn problem(&self, s: f64) -> Result<TailProblem> {
        TailProblem::new(self.mode, self.generator()?, self.marginals()?, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_shapes() {
        assert_eq!(Preset::Table1.scenarios()[0].s_values.len(), 4);
        assert_eq!(Preset::Table5.scenarios().len(), 12);
        assert!(Preset::Table6.scenarios().iter().all(|s| s.s_values == [200.0] && s.alphas.len() == 5));
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
            for sc in p.scenarios() {
                sc.problem(sc.s_values[0]).unwrap();
            }
        }
        assert!("table7".parse::<Preset>().is_err());
    }

    #[test]
    fn clayton_parameters_from_tau() {
        let g = Preset::Table1.scenarios()[0].generator().unwrap();
        assert!((g.param() - 5.0 / 6.0).abs() < 1e-12);
        let g = Preset::Table2.scenarios()[0].generator().unwrap();
        assert!((g.param() - 2.5).abs() < 1e-12);
    }
}

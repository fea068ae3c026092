//! Network definition files and the model document schema.
//!
//! A network file is a JSON document with a `systems` map, an optional
//! composition `expression`, and optional parameter blocks for the
//! experiment drivers. Complex numbers serialize as `[re, im]` pairs and
//! matrices as row-major nested arrays throughout.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use qsc_core::classical::ClassicalModel;
use qsc_core::cmat::{CMat, CVec};
use qsc_core::qsde::{slh_to_coeff, CoeffMatrix, LieAlgElem, SLHTriple};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SystemDoc {
    Classical {
        #[serde(rename = "K")]
        k: CMat,
        #[serde(rename = "M")]
        m: CMat,
        #[serde(rename = "L")]
        l: CMat,
        #[serde(rename = "N")]
        n: CMat,
    },
    Slh {
        #[serde(rename = "S")]
        s: CMat,
        #[serde(rename = "L")]
        l: CMat,
        #[serde(rename = "H")]
        h: CMat,
    },
    Coeff {
        #[serde(rename = "K")]
        k: CMat,
        #[serde(rename = "M")]
        m: CMat,
        #[serde(rename = "L")]
        l: CMat,
        #[serde(rename = "N")]
        n: CMat,
    },
    Lie {
        kappa: CMat,
        mu: CMat,
        lambda: CMat,
        nu: CMat,
    },
}

impl SystemDoc {
    pub fn kind(&self) -> &'static str {
        match self {
            SystemDoc::Classical { .. } => "classical",
            SystemDoc::Slh { .. } => "slh",
            SystemDoc::Coeff { .. } => "coeff",
            SystemDoc::Lie { .. } => "lie",
        }
    }

    pub fn from_classical(m: &ClassicalModel) -> Self {
        SystemDoc::Classical {
            k: m.k().clone(),
            m: m.m().clone(),
            l: m.l().clone(),
            n: m.n().clone(),
        }
    }

    pub fn from_coeff(g: &CoeffMatrix) -> Self {
        SystemDoc::Coeff {
            k: g.k_block(),
            m: g.m_block(),
            l: g.l_block(),
            n: g.n_block(),
        }
    }

    pub fn from_lie(h: &LieAlgElem) -> Self {
        SystemDoc::Lie {
            kappa: h.kappa().clone(),
            mu: h.mu().clone(),
            lambda: h.lambda().clone(),
            nu: h.nu().clone(),
        }
    }

    pub fn to_classical(&self) -> Result<ClassicalModel> {
        match self {
            SystemDoc::Classical { k, m, l, n } => Ok(ClassicalModel::new(
                k.clone(),
                m.clone(),
                l.clone(),
                n.clone(),
            )?),
            other => bail!("system of type '{}' is not a classical model", other.kind()),
        }
    }

    /// Quantum value of the system: a coefficient matrix, with scattering
    /// triples converted through their generator matrix.
    pub fn to_coeff(&self) -> Result<CoeffMatrix> {
        match self {
            SystemDoc::Coeff { k, m, l, n } => Ok(CoeffMatrix::from_blocks(k, m, l, n)?),
            SystemDoc::Slh { s, l, h } => {
                let triple = SLHTriple::new(s.clone(), l.clone(), h.clone())?;
                Ok(slh_to_coeff(&triple))
            }
            other => bail!("system of type '{}' is not a quantum model", other.kind()),
        }
    }

    pub fn to_lie(&self) -> Result<LieAlgElem> {
        match self {
            SystemDoc::Lie {
                kappa,
                mu,
                lambda,
                nu,
            } => Ok(LieAlgElem::new(
                kappa.clone(),
                mu.clone(),
                lambda.clone(),
                nu.clone(),
            )?),
            other => bail!(
                "system of type '{}' is not a Lie-algebra element",
                other.kind()
            ),
        }
    }
}

/// Experiment parameters for the convergence drivers: matrix-element
/// vectors, constant test functions, the horizon, the slice counts, and
/// an optional pass/fail threshold on the final error.
#[derive(Clone, Debug, Deserialize)]
pub struct ExperimentDoc {
    pub t: f64,
    pub grid_sizes: Vec<usize>,
    pub u: CVec,
    pub v: CVec,
    pub f: CVec,
    pub g: CVec,
    #[serde(default)]
    pub threshold: Option<f64>,
}

/// Parameters of the classical time-response driver.
#[derive(Clone, Debug, Deserialize)]
pub struct ResponseDoc {
    pub x0: CVec,
    pub t_grid: Vec<f64>,
    pub u: Vec<CVec>,
    #[serde(default = "default_substeps")]
    pub substeps: usize,
}

fn default_substeps() -> usize {
    16
}

/// Parameters of the Weyl commutation-relation residual sweep.
#[derive(Clone, Debug, Deserialize)]
pub struct WeylDoc {
    pub n_k: usize,
    pub cutoffs: Vec<usize>,
    pub norm_caps: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_trials() -> usize {
    5
}

#[derive(Clone, Debug, Deserialize)]
pub struct NetworkFile {
    #[serde(default)]
    pub systems: BTreeMap<String, SystemDoc>,
    #[serde(default)]
    pub expression: Option<String>,
    #[serde(default)]
    pub experiment: Option<ExperimentDoc>,
    #[serde(default)]
    pub response: Option<ResponseDoc>,
    #[serde(default)]
    pub weyl: Option<WeylDoc>,
}

impl NetworkFile {
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file: NetworkFile =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        Ok(file)
    }

    pub fn expression(&self) -> Result<&str> {
        self.expression
            .as_deref()
            .ok_or_else(|| anyhow!("the network file has no composition expression"))
    }

    pub fn experiment(&self) -> Result<&ExperimentDoc> {
        self.experiment
            .as_ref()
            .ok_or_else(|| anyhow!("the network file has no experiment parameters"))
    }

    pub fn system(&self, name: &str) -> Result<&SystemDoc> {
        self.systems
            .get(name)
            .ok_or_else(|| anyhow!("unknown system '{name}'"))
    }

    /// The single system a one-subject command operates on: the system
    /// named by `--system`, or the only one in the file.
    pub fn sole_system<'a>(
        &'a self,
        requested: Option<&'a str>,
    ) -> Result<(&'a str, &'a SystemDoc)> {
        if let Some(name) = requested {
            return Ok((name, self.system(name)?));
        }
        match self.systems.len() {
            1 => {
                let (name, doc) = self.systems.iter().next().unwrap();
                Ok((name.as_str(), doc))
            }
            0 => bail!("the network file defines no systems"),
            n => bail!("the network file defines {n} systems; pick one with --system"),
        }
    }
}

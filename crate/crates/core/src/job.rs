//! Batch jobs: one validated request in, one deterministic report out.

use std::path::PathBuf;
use std::sync::Arc;

use serde::Serialize;

use crate::arith::prime_divisors;
use crate::element::{BurnsideElement, ElementDoc};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupSpec};
use crate::marks::MarkVariant;
use crate::pairs::PairSpace;
use crate::report::{
    matrix_csv, BasisReport, DecomposeDoc, ElementReport, IdempotentDoc, KernelDoc, MarksDoc, ProjectionDoc,
    SegalDoc,
};
use crate::selftest::{selftest, DEFAULT_CORPUS};
use crate::store::Store;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Basis,
    Compose,
    OneP,
    Project,
    Marks,
    Kernel,
    SegalRank,
    Decompose,
    Selftest,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    /// `G` (or `G1` for composition).
    pub group: Option<GroupSpec>,
    /// The middle group `G2` of a composition; defaults to `group`.
    pub via: Option<GroupSpec>,
    /// `K`; defaults to the trivial group.
    pub target: Option<GroupSpec>,
    pub prime: Option<u64>,
    pub elements: Vec<ElementDoc>,
    pub digits: u32,
    pub variant: MarkVariant,
    pub format: Format,
    pub cache: Option<PathBuf>,
    pub corpus: Option<Vec<String>>,
}

impl JobSpec {
    pub fn new(command: Command) -> JobSpec {
        JobSpec {
            command,
            group: None,
            via: None,
            target: None,
            prime: None,
            elements: Vec::new(),
            digits: 8,
            variant: MarkVariant::Raw,
            format: Format::Json,
            cache: None,
            corpus: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        use Command::*;
        let need_prime = matches!(self.command, OneP | Project | SegalRank);
        if need_prime && self.prime.is_none() {
            return Err(Error::InvalidInput("--prime is required for this command".into()));
        }
        let need_elements = match self.command {
            Compose => 2,
            Project | Decompose => 1,
            _ => 0,
        };
        if self.elements.len() != need_elements {
            return Err(Error::InvalidInput(format!(
                "expected {need_elements} --element inputs, got {}",
                self.elements.len()
            )));
        }
        if self.command != Selftest && self.group.is_none() {
            return Err(Error::InvalidInput("--group is required".into()));
        }
        if self.format == Format::Csv && !matches!(self.command, Marks | Kernel) {
            return Err(Error::InvalidInput("csv output is available for marks and kernel only".into()));
        }
        Ok(())
    }
}

/// A rendered report and whether the job's checks passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobOutput {
    pub body: String,
    pub success: bool,
}

fn json<T: Serialize>(doc: &T) -> Result<JobOutput> {
    let mut body = serde_json::to_string_pretty(doc)?;
    body.push('\n');
    Ok(JobOutput { body, success: true })
}

fn build(spec: &Option<GroupSpec>) -> Result<FiniteGroup> {
    match spec {
        Some(s) => s.build(),
        None => Ok(FiniteGroup::trivial()),
    }
}

/// Reads an element document into `space`, checking its labels.
fn load(space: &Arc<PairSpace>, doc: &ElementDoc) -> Result<BurnsideElement> {
    if doc.source != space.source().label() || doc.target != space.target().label() {
        return Err(Error::AmbientMismatch(format!(
            "element is in A({}, {}) but A({}, {}) was expected",
            doc.source,
            doc.target,
            space.source().label(),
            space.target().label()
        )));
    }
    BurnsideElement::from_doc(space, doc)
}

pub fn run(job: &JobSpec) -> Result<JobOutput> {
    job.validate()?;
    let mut engine = Engine::new();
    if let Some(dir) = &job.cache {
        engine = engine.with_store(Store::open(dir)?);
    }
    run_with(&engine, job)
}

pub fn run_with(engine: &Engine, job: &JobSpec) -> Result<JobOutput> {
    job.validate()?;
    if job.command == Command::Selftest {
        let corpus: Vec<String> = match &job.corpus {
            Some(c) => c.clone(),
            None => DEFAULT_CORPUS.iter().map(|s| s.to_string()).collect(),
        };
        let report = selftest(&corpus)?;
        let mut out = json(&report)?;
        out.success = report.passed;
        return Ok(out);
    }
    let g = build(&job.group)?;
    let k = build(&job.target)?;
    match job.command {
        Command::Basis => json(&BasisReport::new(&*engine.space(&g, &k)?)),
        Command::Compose => {
            let g2 = match &job.via {
                Some(v) => v.build()?,
                None => g.clone(),
            };
            let x = load(&engine.space(&g2, &k)?, &job.elements[0])?;
            let y = load(&engine.space(&g, &g2)?, &job.elements[1])?;
            json(&ElementReport::new(&engine.compose(&x, &y)?))
        }
        Command::OneP => {
            let p = job.prime.expect("validated");
            json(&IdempotentDoc::new(&*engine.one_p(&g, p)?, job.digits))
        }
        Command::Project => {
            let p = job.prime.expect("validated");
            let x = load(&engine.space(&g, &k)?, &job.elements[0])?;
            let pi = engine.pi_p(&x, p)?;
            json(&ProjectionDoc::new(&x, &pi, p, job.digits))
        }
        Command::Marks => {
            let space = engine.space(&g, &k)?;
            let table = engine.marks_table(&space)?;
            let matrix = table.get(job.variant);
            match job.format {
                Format::Json => json(&MarksDoc::new(&space, job.variant, matrix)),
                Format::Csv => {
                    let ids: Vec<usize> = (0..space.len()).collect();
                    Ok(JobOutput {
                        body: matrix_csv(&ids, &ids, matrix),
                        success: true,
                    })
                }
            }
        }
        Command::Kernel => {
            let space = engine.space(&g, &k)?;
            let report = engine.kernel_of_alpha(&g, &k)?;
            match job.format {
                Format::Json => json(&KernelDoc::new(&space, &report)),
                Format::Csv => {
                    let ids: Vec<usize> = (0..space.len()).collect();
                    let matrix = if job.variant == MarkVariant::Raw {
                        &report.raw_matrix
                    } else {
                        &report.with_w_matrix
                    };
                    Ok(JobOutput {
                        body: matrix_csv(&report.prime_power_classes, &ids, matrix),
                        success: true,
                    })
                }
            }
        }
        Command::SegalRank => {
            let p = job.prime.expect("validated");
            let space = engine.space(&g, &k)?;
            json(&SegalDoc::new(&space, &engine.segal_rank(&g, &k, p)?))
        }
        Command::Decompose => {
            let x = load(&engine.space(&g, &k)?, &job.elements[0])?;
            let parts = engine.decompose(&x)?;
            let ranks = prime_divisors(g.order() as u64)
                .into_iter()
                .map(|q| engine.segal_rank(&g, &k, q).map(|r| r.rank))
                .collect::<Result<Vec<_>>>()?;
            json(&DecomposeDoc::new(&x, &parts, &ranks))
        }
        Command::Selftest => unreachable!("handled above"),
    }
}

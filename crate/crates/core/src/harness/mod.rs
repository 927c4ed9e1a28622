//! Executable checks of the supersolvability criterion and its supporting
//! facts, run over single lattices or whole corpora.

mod birkhoff;
mod lemmas;
mod universal;

pub use birkhoff::{
    certify_pair, certify_supersolvable, eval_p, eval_q, phi, pq_violations, psi, verify_pq, Certification,
    CertificationFailure, ChainRecord, Identity, PqViolation, Refutation, SupersolvabilityCertificate, UvTables,
    DEFAULT_GRID_CAP,
};
pub use lemmas::{
    check_chain_modular_pairs, check_cover_persistence, check_induced_chains, check_interval_left_modularity,
    verify_lemma_suite, LemmaSuiteReport,
};
pub use universal::{all_chains, generating_pairs, universal_property_check, universal_property_check_with};

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{io_err, Error, Result};
use crate::format::write_lattice_file;
use crate::lattice::{Chain, Lattice};
use crate::properties::{find_left_modular_chain, is_graded, is_supersolvable};

/// Classification of one lattice against the criterion
/// `graded ∧ left modular ⟺ supersolvable`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem1Outcome {
    pub lattice_key: String,
    pub size: usize,
    pub graded: bool,
    pub left_modular: bool,
    pub supersolvable: bool,
    pub certification: CertificationStatus,
}

/// Outcome of certifying the found left modular chain as an M-chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificationStatus {
    /// The lattice is not graded or has no left modular maximal chain.
    NotApplicable,
    Certified,
    Refuted,
    /// Some down-set grid exceeds the cap.
    OverCap,
}

impl Theorem1Outcome {
    pub fn is_violation(&self) -> bool {
        let lhs = self.graded && self.left_modular;
        lhs != self.supersolvable || self.certification == CertificationStatus::Refuted
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem1Summary {
    pub checked: usize,
    pub graded_left_modular: usize,
    pub supersolvable: usize,
    pub certified: usize,
    pub over_cap: usize,
    pub violations: Vec<Theorem1Outcome>,
}

pub fn classify(lattice: &Lattice, grid_cap: usize) -> Result<Theorem1Outcome> {
    let graded = is_graded(lattice).verdict;
    let chain = find_left_modular_chain(lattice);
    let supersolvable = is_supersolvable(lattice).verdict;
    let certification = match &chain {
        Some(c) if graded => match certify_supersolvable(lattice, c, grid_cap) {
            Ok(cert) if cert.is_certified() => CertificationStatus::Certified,
            Ok(_) => CertificationStatus::Refuted,
            Err(Error::TooLarge { .. }) => CertificationStatus::OverCap,
            Err(e) => return Err(e),
        },
        _ => CertificationStatus::NotApplicable,
    };
    Ok(Theorem1Outcome {
        lattice_key: lattice.canonical_form().to_hex(),
        size: lattice.size(),
        graded,
        left_modular: chain.is_some(),
        supersolvable,
        certification,
    })
}

/// Classifies every lattice in parallel. Violations are listed in canonical
/// key order and, when `dump_dir` is given, written there as lattice files.
pub fn verify_theorem1(lattices: &[Lattice], dump_dir: Option<&Path>, grid_cap: usize) -> Result<Theorem1Summary> {
    let outcomes: Vec<(Theorem1Outcome, &Lattice)> = lattices
        .par_iter()
        .map(|l| classify(l, grid_cap).map(|o| (o, l)))
        .collect::<Result<_>>()?;
    let mut summary = Theorem1Summary {
        checked: outcomes.len(),
        ..Default::default()
    };
    let mut bad = Vec::new();
    for (o, l) in outcomes {
        summary.graded_left_modular += usize::from(o.graded && o.left_modular);
        summary.supersolvable += usize::from(o.supersolvable);
        summary.certified += usize::from(o.certification == CertificationStatus::Certified);
        summary.over_cap += usize::from(o.certification == CertificationStatus::OverCap);
        if o.is_violation() {
            bad.push((o, l));
        }
    }
    bad.sort_by(|a, b| a.0.lattice_key.cmp(&b.0.lattice_key));
    if let Some(dir) = dump_dir {
        if !bad.is_empty() {
            fs::create_dir_all(dir).map_err(io_err(dir))?;
        }
        for (o, l) in &bad {
            let path = dir.join(format!("violation-{}.json", o.lattice_key));
            fs::write(&path, write_lattice_file(l, Some("violation"))).map_err(io_err(&path))?;
        }
    }
    summary.violations = bad.into_iter().map(|(o, _)| o).collect();
    Ok(summary)
}

/// Certifies every supersolvable lattice with the M-chain found by the
/// supersolvability search. Returns the refutations, keyed by lattice index.
pub fn certify_corpus(lattices: &[Lattice], grid_cap: usize) -> Result<Vec<(usize, Refutation)>> {
    let results: Vec<Option<(usize, Refutation)>> = lattices
        .par_iter()
        .enumerate()
        .map(|(idx, l)| {
            let report = is_supersolvable(l);
            let Some(m) = report.witness.filter(|_| report.verdict) else {
                return Ok(None);
            };
            let chain = Chain::new(l, m)?;
            Ok(match certify_supersolvable(l, &chain, grid_cap)? {
                Certification::Certified(_) => None,
                Certification::Refuted(r) => Some((idx, r)),
            })
        })
        .collect::<Result<_>>()?;
    Ok(results.into_iter().flatten().collect())
}

/// Every `(xchain, ychain)` pair with `xchain` a left modular maximal chain
/// and `ychain` a maximal chain (or any chain when `any_ychain`), checked for
/// `t = 1..=max_t`. Returns the first failing report per pair.
pub fn pq_suite(lattice: &Lattice, max_t: usize, any_ychain: bool) -> Vec<crate::properties::PropertyReport> {
    let xchains = crate::properties::left_modular_chains(lattice);
    let ychains = if any_ychain {
        all_chains(lattice)
    } else {
        lattice.maximal_chains()
    };
    let pairs: Vec<(&Chain, &Chain)> = xchains.iter().flat_map(|x| ychains.iter().map(move |y| (x, y))).collect();
    pairs
        .par_iter()
        .filter_map(|(x, y)| {
            (1..=max_t)
                .map(|t| verify_pq(lattice, x, y, t))
                .find(|r| !r.verdict)
        })
        .collect()
}

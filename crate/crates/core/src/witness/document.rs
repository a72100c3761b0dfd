//! JSON form of certificates and reports. Big integers are decimal strings
//! and words use the group's own letter names.

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use super::{
    ClaimReport, Conclusion, GraphicalEvidence, Mode, Sampling, SeparationEvidence, VerificationReport,
    WitnessCertificate, WitnessOutcome,
};
use crate::error::{Error, Result};
use crate::geometry::KBound;
use crate::words::{GroupDescriptor, Word};

pub const CERTIFICATE_FORMAT: &str = "frattini-certificate/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDocument {
    pub rank: usize,
    pub letters: String,
    pub delta: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModeDocument {
    Paper,
    Exploration { n_override: String, multiplier_override: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KBoundDocument {
    pub c: String,
    #[serde(rename = "E")]
    pub e: String,
    pub delta: String,
    pub ball_radius: String,
    pub ball_count: String,
    #[serde(rename = "K")]
    pub k: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub format: String,
    pub group: GroupDocument,
    pub generators: Vec<String>,
    pub g: String,
    pub mode: ModeDocument,
    pub s1_index: usize,
    pub c: Vec<String>,
    #[serde(rename = "T0")]
    pub t0: String,
    pub t0_witness: String,
    #[serde(rename = "T")]
    pub t: String,
    #[serde(rename = "K1")]
    pub k1: String,
    #[serde(rename = "K2")]
    pub k2: String,
    #[serde(rename = "K")]
    pub k: String,
    #[serde(rename = "C")]
    pub growth: String,
    #[serde(rename = "N")]
    pub n: String,
    pub multiplier: String,
    #[serde(rename = "n")]
    pub exponents: Vec<String>,
    pub h: Vec<String>,
    pub k_bounds: Vec<KBoundDocument>,
}

fn bad(what: &str, detail: impl std::fmt::Display) -> Error {
    Error::Certificate(format!("{what}: {detail}"))
}

fn uint(what: &str, s: &str) -> Result<BigUint> {
    s.parse().map_err(|_| bad(what, format!("`{s}` is not a nonnegative decimal integer")))
}

fn small(what: &str, s: &str) -> Result<u64> {
    s.parse().map_err(|_| bad(what, format!("`{s}` is not a 64-bit nonnegative integer")))
}

impl CertificateDocument {
    pub fn from_certificate(cert: &WitnessCertificate) -> CertificateDocument {
        let d = &cert.descriptor;
        let words = |ws: &[Word]| ws.iter().map(|w| d.render(w)).collect::<Vec<_>>();
        CertificateDocument {
            format: CERTIFICATE_FORMAT.into(),
            group: GroupDocument {
                rank: d.rank(),
                letters: d.letter_names().iter().collect(),
                delta: d.delta().to_string(),
            },
            generators: words(&cert.generators),
            g: d.render(&cert.g),
            mode: match &cert.mode {
                Mode::Paper => ModeDocument::Paper,
                Mode::Exploration { n_override, multiplier_override } => ModeDocument::Exploration {
                    n_override: n_override.to_string(),
                    multiplier_override: multiplier_override.to_string(),
                },
            },
            s1_index: cert.s1_index,
            c: words(&cert.c),
            t0: cert.t0.to_string(),
            t0_witness: d.render(&cert.t0_witness),
            t: cert.t.to_string(),
            k1: cert.k1.to_string(),
            k2: cert.k2.to_string(),
            k: cert.k.to_string(),
            growth: cert.growth.to_string(),
            n: cert.n.to_string(),
            multiplier: cert.multiplier.to_string(),
            exponents: cert.exponents.iter().map(ToString::to_string).collect(),
            h: cert.h.iter().map(|h| d.render_power(h)).collect(),
            k_bounds: cert
                .k_bounds
                .iter()
                .map(|kb| KBoundDocument {
                    c: d.render(&kb.c),
                    e: kb.e.to_string(),
                    delta: kb.delta.to_string(),
                    ball_radius: kb.ball_radius.to_string(),
                    ball_count: kb.ball_count.to_string(),
                    k: kb.k.to_string(),
                })
                .collect(),
        }
    }

    /// Parses every field back. Consistency of the values is left to
    /// [`super::verify`].
    pub fn to_certificate(&self) -> Result<WitnessCertificate> {
        if self.format != CERTIFICATE_FORMAT {
            return Err(bad("format", format!("expected `{CERTIFICATE_FORMAT}`, got `{}`", self.format)));
        }
        let names: Vec<char> = self.group.letters.chars().collect();
        if names.len() != self.group.rank {
            return Err(bad("group", "letter count differs from rank"));
        }
        let d = GroupDescriptor::free_with_letters(&names)?;
        if small("group.delta", &self.group.delta)? != d.delta() {
            return Err(bad("group.delta", "free groups have delta 0"));
        }
        let word = |what: &str, s: &str| d.parse_word(s).map_err(|e| bad(what, e));
        let words = |what: &str, ws: &[String]| ws.iter().map(|s| word(what, s)).collect::<Result<Vec<_>>>();
        let g = word("g", &self.g)?;
        let usize_field = |what: &str, s: &str| -> Result<usize> {
            s.parse().map_err(|_| bad(what, format!("`{s}` is not a nonnegative integer")))
        };
        Ok(WitnessCertificate {
            generators: words("generators", &self.generators)?,
            mode: match &self.mode {
                ModeDocument::Paper => Mode::Paper,
                ModeDocument::Exploration { n_override, multiplier_override } => Mode::Exploration {
                    n_override: uint("mode.n_override", n_override)?,
                    multiplier_override: uint("mode.multiplier_override", multiplier_override)?,
                },
            },
            s1_index: self.s1_index,
            c: words("c", &self.c)?,
            t0: usize_field("T0", &self.t0)?,
            t0_witness: word("t0_witness", &self.t0_witness)?,
            t: usize_field("T", &self.t)?,
            k1: uint("K1", &self.k1)?,
            k2: uint("K2", &self.k2)?,
            k: uint("K", &self.k)?,
            growth: usize_field("C", &self.growth)?,
            n: uint("N", &self.n)?,
            multiplier: uint("multiplier", &self.multiplier)?,
            exponents: self.exponents.iter().map(|s| uint("n", s)).collect::<Result<_>>()?,
            h: self
                .h
                .iter()
                .map(|s| d.parse_power_word(s).map(|p| p.normalize()).map_err(|e| bad("h", e)))
                .collect::<Result<_>>()?,
            k_bounds: self
                .k_bounds
                .iter()
                .map(|kb| {
                    Ok(KBound {
                        g: g.clone(),
                        c: word("k_bounds.c", &kb.c)?,
                        e: small("k_bounds.E", &kb.e)?,
                        delta: small("k_bounds.delta", &kb.delta)?,
                        ball_radius: small("k_bounds.ball_radius", &kb.ball_radius)?,
                        ball_count: uint("k_bounds.ball_count", &kb.ball_count)?,
                        k: uint("k_bounds.K", &kb.k)?,
                    })
                })
                .collect::<Result<_>>()?,
            g,
            descriptor: d,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailureDocument {
    pub sample: usize,
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DelzantDocument {
    pub a: String,
    pub hypothesis_failures: usize,
    pub conclusion_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogicalDocument {
    pub f: String,
    pub f_length: String,
    #[serde(rename = "T")]
    pub t: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum GraphicalDocument {
    NotAttempted { reason: String },
    Skipped { reason: String },
    Checked { f_in_q_prime: bool, subgroups_equal: bool, agrees_with_logical: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationDocument {
    pub logical: LogicalDocument,
    pub graphical: GraphicalDocument,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConclusionDocument {
    pub established: bool,
    pub statement: String,
    pub failing_checks: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportDocument {
    pub seed: String,
    pub q_max: usize,
    pub samples_checked: usize,
    pub constants_consistent: bool,
    pub claim_failures: usize,
    pub min_claim_margin: Option<String>,
    pub delzant_checks: DelzantDocument,
    pub syllable_gap_failures: usize,
    pub decomposition_failures: usize,
    pub failures: Vec<FailureDocument>,
    pub note: Option<String>,
    pub regeneration_ok: bool,
    pub separation: SeparationDocument,
    pub conclusion: ConclusionDocument,
}

impl ConclusionDocument {
    pub fn from_conclusion(c: &Conclusion) -> ConclusionDocument {
        ConclusionDocument {
            established: c.established,
            statement: c.statement.clone(),
            failing_checks: c.failing_checks.clone(),
        }
    }
}

impl SeparationDocument {
    fn new(d: &GroupDescriptor, s: &SeparationEvidence) -> SeparationDocument {
        SeparationDocument {
            logical: LogicalDocument {
                f: d.render(&s.logical.f),
                f_length: s.logical.f_length.to_string(),
                t: s.logical.t.to_string(),
                holds: s.logical.holds,
            },
            graphical: match &s.graphical {
                GraphicalEvidence::NotAttempted { reason } => GraphicalDocument::NotAttempted { reason: reason.clone() },
                GraphicalEvidence::Skipped { reason } => GraphicalDocument::Skipped { reason: reason.clone() },
                GraphicalEvidence::Checked { f_in_q_prime, subgroups_equal } => GraphicalDocument::Checked {
                    f_in_q_prime: *f_in_q_prime,
                    subgroups_equal: *subgroups_equal,
                    agrees_with_logical: s.agreement().unwrap_or(false),
                },
            },
        }
    }
}

impl ReportDocument {
    pub fn new(cert: &WitnessCertificate, sampling: Sampling, r: &VerificationReport) -> ReportDocument {
        let claim: &ClaimReport = &r.claim;
        ReportDocument {
            seed: sampling.seed.to_string(),
            q_max: sampling.q_max,
            samples_checked: claim.samples_checked,
            constants_consistent: r.constants_consistent,
            claim_failures: claim.claim_failures,
            min_claim_margin: claim.min_claim_margin.as_ref().map(BigInt::to_string),
            delzant_checks: DelzantDocument {
                a: cert.t.to_string(),
                hypothesis_failures: claim.delzant_hypothesis_failures,
                conclusion_failures: claim.delzant_conclusion_failures,
            },
            syllable_gap_failures: claim.syllable_gap_failures,
            decomposition_failures: claim.decomposition_failures,
            failures: claim
                .failures
                .iter()
                .map(|f| FailureDocument { sample: f.sample, check: f.check.into(), detail: f.detail.clone() })
                .collect(),
            note: claim.note.clone(),
            regeneration_ok: r.regeneration_ok,
            separation: SeparationDocument::new(&cert.descriptor, &r.separation),
            conclusion: ConclusionDocument::from_conclusion(&r.conclusion),
        }
    }
}

/// Everything `witness run` prints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OutcomeDocument {
    pub classification: String,
    pub certificate: Option<CertificateDocument>,
    pub report: Option<ReportDocument>,
    pub conclusion: ConclusionDocument,
}

impl OutcomeDocument {
    pub fn new(outcome: &WitnessOutcome, sampling: Sampling) -> OutcomeDocument {
        OutcomeDocument {
            classification: outcome.class.as_str().into(),
            certificate: outcome.certificate.as_ref().map(CertificateDocument::from_certificate),
            report: match (&outcome.certificate, &outcome.report) {
                (Some(c), Some(r)) => Some(ReportDocument::new(c, sampling, r)),
                _ => None,
            },
            conclusion: ConclusionDocument::from_conclusion(&outcome.conclusion),
        }
    }
}

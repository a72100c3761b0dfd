//! Certificates that an element `g` of a non-elementary subgroup
//! `H = ⟨s_1, ..., s_t⟩` is not a non-generator of `H`.
//!
//! The construction replaces each `s_j` by `h_j = g^{n_j} c_j g^{10 n_j}`
//! with huge `n_j`, so that `Q = {g, h_1, ..., h_t}` still generates `H`
//! while every nontrivial product of the `h_j` is long. The shortest
//! nontrivial element `f` of `H` is then missed by `⟨Q - {g}⟩`.
//!
//! ```
//! use frattini::witness::{run, Mode, Sampling, WitnessRequest};
//! use frattini::GroupDescriptor;
//!
//! let d = GroupDescriptor::free(2).unwrap();
//! let req = WitnessRequest::new(
//!     d.clone(),
//!     vec![d.parse_word("a").unwrap(), d.parse_word("b").unwrap()],
//!     d.parse_word("ab").unwrap(),
//!     Mode::Paper,
//!     Sampling { q_max: 4, sample_count: 20, seed: 0 },
//! );
//! let outcome = run(&req, 100_000).unwrap();
//! assert!(outcome.conclusion.established);
//! ```

mod document;

pub use document::{
    CertificateDocument, ConclusionDocument, GroupDocument, KBoundDocument, ModeDocument, OutcomeDocument, ReportDocument,
    CERTIFICATE_FORMAT,
};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{self, growth_constant, k_bound, DelzantSequence, KBound};
use crate::stallings::{equal_subgroups, CoreGraph};
use crate::words::{GroupDescriptor, PowerWord, Word};

pub const PAPER_MULTIPLIER: u32 = 1000;
const MAX_RECORDED_FAILURES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Paper,
    /// Small user-chosen constants: `N = n_override`, `n_j = multiplier · j · N`.
    Exploration { n_override: BigUint, multiplier_override: BigUint },
}

impl Mode {
    pub fn is_paper(&self) -> bool {
        matches!(self, Mode::Paper)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub q_max: usize,
    pub sample_count: usize,
    pub seed: u64,
}

impl Default for Sampling {
    fn default() -> Sampling {
        Sampling { q_max: 12, sample_count: 1000, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct WitnessRequest {
    pub descriptor: GroupDescriptor,
    pub generators: Vec<Word>,
    pub g: Word,
    pub mode: Mode,
    pub sampling: Sampling,
}

impl WitnessRequest {
    pub fn new(descriptor: GroupDescriptor, generators: Vec<Word>, g: Word, mode: Mode, sampling: Sampling) -> Self {
        WitnessRequest { descriptor, generators, g, mode, sampling }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputClass {
    Ok,
    NotInSubgroup,
    Elementary,
    TrivialG,
}

impl InputClass {
    pub fn as_str(self) -> &'static str {
        match self {
            InputClass::Ok => "ok",
            InputClass::NotInSubgroup => "not_in_subgroup",
            InputClass::Elementary => "elementary",
            InputClass::TrivialG => "trivial_g",
        }
    }
}

/// Classifies a request. A subgroup of rank at most one is reported as
/// elementary before `g` itself is looked at.
pub fn check_input(req: &WitnessRequest) -> Result<(InputClass, CoreGraph)> {
    req.descriptor.check(&req.g)?;
    let graph = CoreGraph::build(&req.descriptor, &req.generators)?;
    let class = if graph.rank() <= 1 {
        InputClass::Elementary
    } else if req.g.is_identity() {
        InputClass::TrivialG
    } else if !graph.contains(&req.g) {
        InputClass::NotInSubgroup
    } else {
        InputClass::Ok
    };
    Ok((class, graph))
}

/// Generators rewritten so that none lies in `E(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedGenerators {
    /// Index in the original list of the generator moved to the front.
    pub s1_index: usize,
    pub c: Vec<Word>,
}

/// Position `j` of the reordered list holds original generator
/// `original_index(j, s1_index)`.
pub fn original_index(j: usize, s1_index: usize) -> usize {
    if j == 0 {
        s1_index
    } else if j == s1_index {
        0
    } else {
        j
    }
}

pub fn normalize_generators(generators: &[Word], g: &Word) -> Result<NormalizedGenerators> {
    let comm = geometry::commensurator(g)?;
    let s1_index = generators
        .iter()
        .position(|s| !comm.contains(s))
        .ok_or(Error::AllGeneratorsInCommensurator)?;
    let s1 = &generators[s1_index];
    let c: Vec<Word> = (0..generators.len())
        .map(|j| {
            let s = &generators[original_index(j, s1_index)];
            if j > 0 && comm.contains(s) {
                s.multiply(s1)
            } else {
                s.clone()
            }
        })
        .collect();
    if let Some(bad) = c.iter().find(|cj| comm.contains(cj)) {
        return Err(Error::CommensuratorViolation { g: g.to_string(), c: bad.to_string() });
    }
    Ok(NormalizedGenerators { s1_index, c })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCertificate {
    pub descriptor: GroupDescriptor,
    pub generators: Vec<Word>,
    pub g: Word,
    pub mode: Mode,
    pub s1_index: usize,
    pub c: Vec<Word>,
    pub t0: usize,
    pub t0_witness: Word,
    pub t: usize,
    pub k1: BigUint,
    pub k2: BigUint,
    pub k: BigUint,
    pub growth: usize,
    pub n: BigUint,
    pub multiplier: BigUint,
    pub exponents: Vec<BigUint>,
    pub h: Vec<PowerWord>,
    pub k_bounds: Vec<KBound>,
}

impl WitnessCertificate {
    pub fn t_count(&self) -> usize {
        self.c.len()
    }
}

/// Least integer `N > 1` with `C·N ≥ 3K + 2δ + 100T`.
pub fn paper_scale(k: &BigUint, delta: u64, t: usize, c: usize) -> BigUint {
    let need = BigUint::from(3u32) * k + 2 * delta + 100 * t as u64;
    need.div_ceil(&BigUint::from(c)).max(BigUint::from(2u32))
}

pub fn compute_constants(
    req: &WitnessRequest,
    normalized: &NormalizedGenerators,
    h_graph: &CoreGraph,
) -> Result<WitnessCertificate> {
    let d = &req.descriptor;
    let g = &req.g;
    let t0_witness = h_graph.shortest_nontrivial().ok_or(Error::TrivialElement)?;
    let t0 = t0_witness.len();
    let t = t0 + 1;
    let k_bounds = normalized.c.iter().map(|c| k_bound(d, g, c)).collect::<Result<Vec<_>>>()?;
    let k1 = k_bounds.iter().map(|kb| kb.k.clone()).max().unwrap_or_default();
    let k2 = BigUint::from(normalized.c.iter().map(Word::len).max().unwrap_or(0));
    let k = k1.clone().max(k2.clone());
    let growth = growth_constant(g)?.c;
    let (n, multiplier) = match &req.mode {
        Mode::Paper => (paper_scale(&k, d.delta(), t, growth), BigUint::from(PAPER_MULTIPLIER)),
        Mode::Exploration { n_override, multiplier_override } => (n_override.clone(), multiplier_override.clone()),
    };
    let exponents: Vec<BigUint> = (1..=normalized.c.len()).map(|j| &multiplier * j * &n).collect();
    let h = normalized
        .c
        .iter()
        .zip(&exponents)
        .map(|(c, nj)| conjugated_generator(g, c, nj))
        .collect();
    Ok(WitnessCertificate {
        descriptor: d.clone(),
        generators: req.generators.clone(),
        g: g.clone(),
        mode: req.mode.clone(),
        s1_index: normalized.s1_index,
        c: normalized.c.clone(),
        t0,
        t0_witness,
        t,
        k1,
        k2,
        k,
        growth,
        n,
        multiplier,
        exponents,
        h,
        k_bounds,
    })
}

/// `g^{n} c g^{10n}`.
pub fn conjugated_generator(g: &Word, c: &Word, n: &BigUint) -> PowerWord {
    let n = BigInt::from(n.clone());
    PowerWord::product(&[PowerWord::power(g, n.clone()), PowerWord::from_word(c), PowerWord::power(g, n * 10)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Syllable {
    /// 0-based index into `h`.
    pub index: usize,
    pub inverse: bool,
}

/// A freely reduced product `h_{j_1}^{±1} ... h_{j_q}^{±1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductForm {
    syllables: Vec<Syllable>,
}

impl ProductForm {
    pub fn new(syllables: Vec<Syllable>, t: usize) -> Result<ProductForm> {
        if syllables.is_empty() {
            return Err(Error::InvalidProduct("a product needs at least one syllable".into()));
        }
        if let Some(s) = syllables.iter().find(|s| s.index >= t) {
            return Err(Error::InvalidProduct(format!("index {} out of range for {t} generators", s.index + 1)));
        }
        if let Some(i) = syllables.windows(2).position(|p| p[0].index == p[1].index && p[0].inverse != p[1].inverse) {
            return Err(Error::InvalidProduct(format!(
                "syllables {} and {} cancel: the product is not freely reduced",
                i + 1,
                i + 2
            )));
        }
        Ok(ProductForm { syllables })
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn q(&self) -> usize {
        self.syllables.len()
    }

    /// `(m_i, l_i)` for each syllable.
    pub fn exponents(&self, cert: &WitnessCertificate) -> Vec<(BigInt, BigInt)> {
        self.syllables
            .iter()
            .map(|s| {
                let n = BigInt::from(cert.exponents[s.index].clone());
                if s.inverse {
                    (-(&n * BigInt::from(10)), -n)
                } else {
                    (n.clone(), n * 10)
                }
            })
            .collect()
    }

    /// `b_i = c_{j_i}^{ε_i}`.
    pub fn middles(&self, cert: &WitnessCertificate) -> Vec<Word> {
        self.syllables
            .iter()
            .map(|s| {
                let c = &cert.c[s.index];
                if s.inverse {
                    c.inverse()
                } else {
                    c.clone()
                }
            })
            .collect()
    }

    pub fn evaluate(&self, cert: &WitnessCertificate) -> PowerWord {
        let parts: Vec<PowerWord> = self
            .syllables
            .iter()
            .map(|s| {
                let h = &cert.h[s.index];
                if s.inverse {
                    h.inverse()
                } else {
                    h.clone()
                }
            })
            .collect();
        PowerWord::product(&parts)
    }

    /// The broken geodesic `x_0 = 1, x_1 = g^{m_1}, ...,
    /// x_i = g^{m_1} b_1 g^{l_1 + m_2} ... b_{i-1} g^{l_{i-1} + m_i}`,
    /// without the final point `w`.
    pub fn breakpoints(&self, cert: &WitnessCertificate) -> Vec<PowerWord> {
        let ex = self.exponents(cert);
        let b = self.middles(cert);
        let mut points = vec![PowerWord::identity()];
        let mut x = PowerWord::power(&cert.g, ex[0].0.clone());
        points.push(x.clone());
        for i in 1..self.q() {
            let step = PowerWord::product(&[
                PowerWord::from_word(&b[i - 1]),
                PowerWord::power(&cert.g, &ex[i - 1].1 + &ex[i].0),
            ]);
            x = x.multiply(&step);
            points.push(x.clone());
        }
        points
    }
}

/// Seeded sampling of reduced products with `q` uniform in `1..=q_max`.
/// Adjacent inverse pairs are redrawn.
pub fn sample_products(cert: &WitnessCertificate, q_max: usize, count: usize, seed: u64) -> Vec<ProductForm> {
    let t = cert.t_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let q = rng.gen_range(1..=q_max.max(1));
            let mut syllables: Vec<Syllable> = Vec::with_capacity(q);
            while syllables.len() < q {
                let s = Syllable { index: rng.gen_range(0..t), inverse: rng.gen_bool(0.5) };
                if syllables.last().is_some_and(|p| p.index == s.index && p.inverse != s.inverse) {
                    continue;
                }
                syllables.push(s);
            }
            ProductForm::new(syllables, t).expect("sampler emits reduced products")
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormFailure {
    pub sample: usize,
    pub check: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimReport {
    pub samples_checked: usize,
    pub claim_failures: usize,
    pub delzant_hypothesis_failures: usize,
    pub delzant_conclusion_failures: usize,
    pub syllable_gap_failures: usize,
    pub decomposition_failures: usize,
    /// Least `|w| - T·q` over the samples.
    pub min_claim_margin: Option<BigInt>,
    pub failures: Vec<FormFailure>,
    pub note: Option<String>,
}

impl ClaimReport {
    pub fn all_passed(&self) -> bool {
        self.claim_failures == 0
            && self.delzant_hypothesis_failures == 0
            && self.delzant_conclusion_failures == 0
            && self.syllable_gap_failures == 0
            && self.decomposition_failures == 0
    }
}

fn check_form(cert: &WitnessCertificate, sample: usize, form: &ProductForm) -> (BigInt, Vec<FormFailure>) {
    let mut failures = Vec::new();
    let mut fail = |check: &'static str, detail: String| failures.push(FormFailure { sample, check, detail });
    let q = form.q();
    let w = form.evaluate(cert);
    let margin = BigInt::from(w.length()) - BigInt::from(cert.t * q);
    if margin < BigInt::zero() {
        fail("claim", format!("|w| = {} < T·q = {}", w.length(), cert.t * q));
    }

    let n = BigInt::from(cert.n.clone());
    let ex = form.exponents(cert);
    for (i, (m, l)) in ex.iter().enumerate() {
        if m.magnitude() < n.magnitude() || l.magnitude() < n.magnitude() {
            fail("syllable_gap", format!("syllable {}: |m| = {}, |l| = {}, N = {n}", i + 1, m.magnitude(), l.magnitude()));
        }
        if let Some((next_m, _)) = ex.get(i + 1) {
            let gap = l + next_m;
            if gap.magnitude() < n.magnitude() {
                fail("syllable_gap", format!("|l_{} + m_{}| = {} < N = {n}", i + 1, i + 2, gap.magnitude()));
            }
        }
    }

    let mut points = form.breakpoints(cert);
    let last = points.last().expect("at least two breakpoints").clone();
    let b_last = form.middles(cert).pop().expect("nonempty form");
    let l_last = ex.last().expect("nonempty form").1.clone();
    let tail = PowerWord::product(&[last, PowerWord::from_word(&b_last), PowerWord::power(&cert.g, l_last)]);
    if !tail.equals(&w) {
        fail("decomposition", "breakpoints do not end at w".into());
    }
    points.push(w);
    let seq = DelzantSequence::new(points, cert.t as u64, cert.descriptor.delta()).expect("q + 2 ≥ 3 points");
    match seq.first_hypothesis_failure() {
        Ok(None) => {}
        Ok(Some(i)) => fail("delzant_hypothesis", format!("gap condition fails at points {}..{}", i, i + 2)),
        Err(e) => fail("delzant_hypothesis", e.to_string()),
    }
    if let Some((i, j)) = seq.first_conclusion_failure() {
        fail("delzant_conclusion", format!("d(x_{i}, x_{j}) < T·{}", j - i));
    }
    (margin, failures)
}

/// Checks the length lower bound, the gap conditions and the broken
/// geodesic of every form.
pub fn verify_claim(cert: &WitnessCertificate, forms: &[ProductForm]) -> ClaimReport {
    let results: Vec<(BigInt, Vec<FormFailure>)> =
        forms.par_iter().enumerate().map(|(i, f)| check_form(cert, i, f)).collect();
    let count = |name: &str| results.iter().filter(|(_, fs)| fs.iter().any(|f| f.check == name)).count();
    let mut report = ClaimReport {
        samples_checked: forms.len(),
        claim_failures: count("claim"),
        delzant_hypothesis_failures: count("delzant_hypothesis"),
        delzant_conclusion_failures: count("delzant_conclusion"),
        syllable_gap_failures: count("syllable_gap"),
        decomposition_failures: count("decomposition"),
        min_claim_margin: results.iter().map(|(m, _)| m.clone()).min(),
        failures: results.into_iter().flat_map(|(_, fs)| fs).take(MAX_RECORDED_FAILURES).collect(),
        note: None,
    };
    if !report.all_passed() && cert.mode.is_paper() {
        report.note = Some("paper-mode constants guarantee every checked inequality, so this failure is an implementation bug".into());
    }
    report
}

/// Checks that `g^{-n_j} h_j g^{-10 n_j} = c_j` and that each original
/// generator is recovered from `c_j` and `s_1`.
pub fn verify_regeneration(cert: &WitnessCertificate) -> bool {
    let t = cert.t_count();
    if cert.h.len() != t || cert.exponents.len() != t || cert.generators.len() != t || cert.s1_index >= t {
        return false;
    }
    let s1 = &cert.generators[cert.s1_index];
    (0..t).all(|j| {
        let n = BigInt::from(cert.exponents[j].clone());
        let back = PowerWord::product(&[
            PowerWord::power(&cert.g, -n.clone()),
            cert.h[j].clone(),
            PowerWord::power(&cert.g, -n * 10),
        ]);
        let s = &cert.generators[original_index(j, cert.s1_index)];
        back.equals_word(&cert.c[j]) && (*s == cert.c[j] || *s == cert.c[j].multiply(&s1.inverse()))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalEvidence {
    pub f: Word,
    pub f_length: usize,
    pub t: usize,
    /// `|f| < T` and no sampled product violated the length bound.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphicalEvidence {
    NotAttempted { reason: String },
    Skipped { reason: String },
    Checked { f_in_q_prime: bool, subgroups_equal: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationEvidence {
    pub logical: LogicalEvidence,
    pub graphical: GraphicalEvidence,
}

impl SeparationEvidence {
    /// `None` when only one kind of evidence is available.
    pub fn agreement(&self) -> Option<bool> {
        match self.graphical {
            GraphicalEvidence::Checked { f_in_q_prime, subgroups_equal } => {
                Some(self.logical.holds == (!f_in_q_prime && !subgroups_equal))
            }
            _ => None,
        }
    }
}

/// Logical evidence always; in exploration mode also folds the expanded
/// `h_j` and tests `f` and subgroup equality directly.
pub fn verify_separation(
    cert: &WitnessCertificate,
    h_graph: &CoreGraph,
    claim: &ClaimReport,
    expand_limit: usize,
) -> Result<SeparationEvidence> {
    let logical = LogicalEvidence {
        f: cert.t0_witness.clone(),
        f_length: cert.t0,
        t: cert.t,
        holds: cert.t0 < cert.t && claim.claim_failures == 0,
    };
    let graphical = if cert.mode.is_paper() {
        GraphicalEvidence::NotAttempted { reason: "paper-mode generators are too long to expand".into() }
    } else {
        match cert.h.iter().map(|h| h.expand(expand_limit)).collect::<Result<Vec<Word>>>() {
            Ok(words) => {
                let q_prime = CoreGraph::build(&cert.descriptor, &words)?;
                GraphicalEvidence::Checked {
                    f_in_q_prime: q_prime.contains(&cert.t0_witness),
                    subgroups_equal: equal_subgroups(&q_prime, h_graph),
                }
            }
            Err(Error::ExpansionLimit { length, limit }) => GraphicalEvidence::Skipped {
                reason: format!("a generator has length {length} above the expansion limit {limit}; evidence is logical only"),
            },
            Err(e) => return Err(e),
        }
    };
    Ok(SeparationEvidence { logical, graphical })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conclusion {
    pub established: bool,
    pub statement: String,
    pub failing_checks: Vec<String>,
}

pub fn conclude(
    cert: &WitnessCertificate,
    claim: &ClaimReport,
    regeneration_ok: bool,
    separation: &SeparationEvidence,
) -> Conclusion {
    let mut failing = Vec::new();
    let mut need = |ok: bool, name: &str| {
        if !ok {
            failing.push(name.to_string());
        }
    };
    need(claim.claim_failures == 0, "claim");
    need(claim.delzant_hypothesis_failures == 0, "delzant_hypothesis");
    need(claim.delzant_conclusion_failures == 0, "delzant_conclusion");
    need(claim.syllable_gap_failures == 0, "syllable_gap");
    need(claim.decomposition_failures == 0, "decomposition");
    need(claim.samples_checked > 0, "samples");
    need(regeneration_ok, "regeneration");
    need(separation.logical.holds, "logical_separation");
    if !cert.mode.is_paper() {
        match separation.graphical {
            GraphicalEvidence::Checked { f_in_q_prime, subgroups_equal } => {
                need(!f_in_q_prime && !subgroups_equal, "graphical_separation")
            }
            _ => need(false, "graphical_separation"),
        }
    }
    let d = &cert.descriptor;
    if failing.is_empty() {
        Conclusion {
            established: true,
            statement: format!(
                "g = {} is not in the Frattini subgroup of H: Q = {{g, h_1..h_{}}} generates H, while Q - {{g}} misses f = {}",
                d.render(&cert.g),
                cert.t_count(),
                d.render(&cert.t0_witness)
            ),
            failing_checks: failing,
        }
    } else {
        Conclusion {
            established: false,
            statement: format!("refused: failing checks {}", failing.join(", ")),
            failing_checks: failing,
        }
    }
}

/// Refusal for requests that never reach the construction.
pub fn refusal(class: InputClass) -> Conclusion {
    let statement = match class {
        InputClass::Elementary => {
            "refused: H is elementary (cyclic or trivial), so its Frattini subgroup is finite and no witness is built"
        }
        InputClass::TrivialG => "refused: g is trivial",
        InputClass::NotInSubgroup => "refused: g is not an element of H",
        InputClass::Ok => "refused",
    };
    Conclusion { established: false, statement: statement.into(), failing_checks: vec![class.as_str().into()] }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub constants_consistent: bool,
    pub claim: ClaimReport,
    pub regeneration_ok: bool,
    pub separation: SeparationEvidence,
    pub conclusion: Conclusion,
}

#[derive(Clone, Debug)]
pub struct WitnessOutcome {
    pub class: InputClass,
    pub certificate: Option<WitnessCertificate>,
    pub report: Option<VerificationReport>,
    pub conclusion: Conclusion,
}

/// Validates the request and builds the certificate.
pub fn build(req: &WitnessRequest) -> Result<(InputClass, Option<WitnessCertificate>, CoreGraph)> {
    let (class, graph) = check_input(req)?;
    if class != InputClass::Ok {
        return Ok((class, None, graph));
    }
    let normalized = normalize_generators(&req.generators, &req.g)?;
    let cert = compute_constants(req, &normalized, &graph)?;
    Ok((class, Some(cert), graph))
}

/// Recomputes the constants from the certificate's own inputs and runs
/// every check.
pub fn verify(cert: &WitnessCertificate, sampling: Sampling, expand_limit: usize) -> Result<VerificationReport> {
    let req = WitnessRequest::new(cert.descriptor.clone(), cert.generators.clone(), cert.g.clone(), cert.mode.clone(), sampling);
    let (class, fresh, graph) = build(&req)?;
    if class != InputClass::Ok {
        return Err(Error::Certificate(format!("certificate inputs classify as {}", class.as_str())));
    }
    let constants_consistent = fresh.as_ref() == Some(cert);
    let forms = sample_products(cert, sampling.q_max, sampling.sample_count, sampling.seed);
    let claim = verify_claim(cert, &forms);
    let regeneration_ok = verify_regeneration(cert);
    let separation = verify_separation(cert, &graph, &claim, expand_limit)?;
    let mut conclusion = conclude(cert, &claim, regeneration_ok, &separation);
    if !constants_consistent {
        conclusion.established = false;
        conclusion.failing_checks.insert(0, "constants".into());
        conclusion.statement = format!("refused: failing checks {}", conclusion.failing_checks.join(", "));
    }
    Ok(VerificationReport { constants_consistent, claim, regeneration_ok, separation, conclusion })
}

/// The whole pipeline: classify, build, verify, conclude.
pub fn run(req: &WitnessRequest, expand_limit: usize) -> Result<WitnessOutcome> {
    let (class, cert, _) = build(req)?;
    let Some(cert) = cert else {
        return Ok(WitnessOutcome { class, certificate: None, report: None, conclusion: refusal(class) });
    };
    let report = verify(&cert, req.sampling, expand_limit)?;
    Ok(WitnessOutcome { class, conclusion: report.conclusion.clone(), certificate: Some(cert), report: Some(report) })
}

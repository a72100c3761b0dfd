use frattini::witness::{
    self, check_input, normalize_generators, sample_products, verify_claim, verify_regeneration, CertificateDocument,
    GraphicalEvidence, InputClass, Mode, ProductForm, Sampling, Syllable, WitnessRequest,
};
use frattini::{Error, GroupDescriptor, PowerWord, Word};
use num_bigint::BigUint;

fn f2() -> GroupDescriptor {
    GroupDescriptor::free(2).unwrap()
}

fn words(d: &GroupDescriptor, ws: &[&str]) -> Vec<Word> {
    ws.iter().map(|w| d.parse_word(w).unwrap()).collect()
}

fn request(gens: &[&str], g: &str, mode: Mode, sampling: Sampling) -> WitnessRequest {
    let d = f2();
    WitnessRequest::new(d.clone(), words(&d, gens), d.parse_word(g).unwrap(), mode, sampling)
}

fn explore(n: u32, mult: u32) -> Mode {
    Mode::Exploration { n_override: BigUint::from(n), multiplier_override: BigUint::from(mult) }
}

fn small() -> Sampling {
    Sampling { q_max: 6, sample_count: 60, seed: 1 }
}

#[test]
fn input_classification() {
    let class = |gens: &[&str], g: &str| check_input(&request(gens, g, Mode::Paper, small())).unwrap().0;
    assert_eq!(class(&["a", "b"], "ab"), InputClass::Ok);
    assert_eq!(class(&["ab"], "ab"), InputClass::Elementary);
    assert_eq!(class(&["a", "b"], ""), InputClass::TrivialG);
    assert_eq!(class(&["aa", "b"], "a"), InputClass::NotInSubgroup);
    assert_eq!(class(&[], "a"), InputClass::Elementary);
}

#[test]
fn generator_normalization() {
    let d = f2();
    let n = normalize_generators(&words(&d, &["a", "b"]), &d.parse_word("ab").unwrap()).unwrap();
    assert_eq!((n.s1_index, n.c), (0, words(&d, &["a", "b"])));
    let n = normalize_generators(&words(&d, &["ab", "b"]), &d.parse_word("ab").unwrap()).unwrap();
    assert_eq!((n.s1_index, n.c), (1, words(&d, &["b", "abb"])));
    assert_eq!(
        normalize_generators(&words(&d, &["ab", "abab"]), &d.parse_word("ab").unwrap()),
        Err(Error::AllGeneratorsInCommensurator)
    );
    let n = normalize_generators(&words(&d, &["BA", "a", "abab", "b"]), &d.parse_word("ab").unwrap()).unwrap();
    assert_eq!((n.s1_index, n.c), (1, words(&d, &["a", "B", "ababa", "b"])));
}

#[test]
fn paper_constants_for_the_free_group_of_rank_two() {
    let (class, cert, _) = witness::build(&request(&["a", "b"], "ab", Mode::Paper, small())).unwrap();
    assert_eq!(class, InputClass::Ok);
    let cert = cert.unwrap();
    // K(ab, a) = 2·|B(6)|·(2·2 + 1) + 2·1 with |B(6)| = 1 + 4(3^6 - 1)/2
    let ball = 1 + 4 * (3u64.pow(6) - 1) / 2;
    let k = 2 * ball * 5 + 2;
    assert_eq!(k, 14572);
    let n = (3 * k + 100 * 2).div_ceil(2);
    assert_eq!(n, 21958);
    assert_eq!((cert.t0, cert.t, cert.growth), (1, 2, 2));
    assert_eq!(cert.t0_witness, Word::letter(frattini::Letter::generator(0)));
    assert_eq!((cert.k1.clone(), cert.k2.clone(), cert.k.clone()), (k.into(), 1u32.into(), k.into()));
    assert_eq!(cert.n, BigUint::from(n));
    assert_eq!(cert.exponents, vec![BigUint::from(1000 * n), BigUint::from(2000 * n)]);
    assert_eq!(cert.exponents[0], BigUint::from(21_958_000u32));
    // h_1 = (ab)^{n_1} a (ab)^{10 n_1}: no cancellation, 22 n_1 + 1 letters
    assert_eq!(cert.h[0].length(), BigUint::from(22u64 * 21_958_000 + 1));
    assert!(verify_regeneration(&cert));
}

#[test]
fn paper_mode_claim_holds_on_samples() {
    let req = request(&["a", "b"], "ab", Mode::Paper, small());
    let outcome = witness::run(&req, 100_000).unwrap();
    let report = outcome.report.unwrap();
    assert!(report.claim.all_passed(), "{:?}", report.claim.failures);
    assert!(report.constants_consistent && report.regeneration_ok);
    assert!(matches!(report.separation.graphical, GraphicalEvidence::NotAttempted { .. }));
    assert!(outcome.conclusion.established, "{}", outcome.conclusion.statement);
}

#[test]
fn single_syllable_length() {
    let (_, cert, _) = witness::build(&request(&["a", "b"], "ab", Mode::Paper, small())).unwrap();
    let cert = cert.unwrap();
    let form = ProductForm::new(vec![Syllable { index: 0, inverse: false }], 2).unwrap();
    assert!(form.evaluate(&cert).length() >= BigUint::from(cert.t));
    let report = verify_claim(&cert, &[form]);
    assert!(report.all_passed());
}

#[test]
fn product_forms_reject_cancelling_pairs() {
    let s = |index, inverse| Syllable { index, inverse };
    assert!(ProductForm::new(vec![s(0, false), s(0, true)], 2).is_err());
    assert!(ProductForm::new(vec![s(0, false), s(0, false), s(1, true)], 2).is_ok());
    assert!(ProductForm::new(vec![], 2).is_err());
    assert!(ProductForm::new(vec![s(2, false)], 2).is_err());
}

#[test]
fn sampling_is_deterministic_and_covers_single_syllables() {
    let (_, cert, _) = witness::build(&request(&["a", "b"], "ab", explore(1, 1), small())).unwrap();
    let cert = cert.unwrap();
    let a = sample_products(&cert, 10, 100, 1);
    assert_eq!(a.len(), 100);
    assert_eq!(a, sample_products(&cert, 10, 100, 1));
    assert_ne!(a, sample_products(&cert, 10, 100, 2));
    let singles: std::collections::BTreeSet<(usize, bool)> = sample_products(&cert, 1, 200, 0)
        .iter()
        .map(|f| (f.syllables()[0].index, f.syllables()[0].inverse))
        .collect();
    assert_eq!(singles.len(), 2 * cert.t_count());
}

#[test]
fn exploration_mode_separates_graphically() {
    let req = request(&["a", "b"], "ab", explore(1, 1), small());
    let outcome = witness::run(&req, 100_000).unwrap();
    let cert = outcome.certificate.unwrap();
    assert_eq!(cert.exponents, vec![BigUint::from(1u32), BigUint::from(2u32)]);
    let report = outcome.report.unwrap();
    assert_eq!(
        report.separation.graphical,
        GraphicalEvidence::Checked { f_in_q_prime: false, subgroups_equal: false }
    );
    assert_eq!(report.separation.agreement(), Some(true));
}

#[test]
fn degenerate_multiplier_is_refused() {
    let req = request(&["a", "b"], "ab", explore(1, 0), small());
    let outcome = witness::run(&req, 100_000).unwrap();
    let report = outcome.report.unwrap();
    assert!(report.claim.claim_failures > 0);
    assert!(!outcome.conclusion.established);
    assert!(outcome.conclusion.failing_checks.contains(&"claim".to_string()));
}

#[test]
fn corrupted_generator_breaks_regeneration() {
    let (_, cert, _) = witness::build(&request(&["a", "b"], "ab", Mode::Paper, small())).unwrap();
    let mut cert = cert.unwrap();
    cert.h[0] = cert.h[0].multiply(&PowerWord::from_word(&"b".parse().unwrap()));
    assert!(!verify_regeneration(&cert));
}

#[test]
fn elementary_subgroups_are_refused() {
    let outcome = witness::run(&request(&["ab"], "ab", Mode::Paper, small()), 100_000).unwrap();
    assert_eq!(outcome.class, InputClass::Elementary);
    assert!(outcome.certificate.is_none());
    assert!(!outcome.conclusion.established);
    assert!(outcome.conclusion.statement.contains("elementary"));
}

#[test]
fn certificate_json_round_trip() {
    let (_, cert, _) = witness::build(&request(&["ab", "b"], "ab", Mode::Paper, small())).unwrap();
    let cert = cert.unwrap();
    let doc = CertificateDocument::from_certificate(&cert);
    let text = serde_json::to_string_pretty(&doc).unwrap();
    assert!(text.contains("\"N\": \""));
    let back: CertificateDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_certificate().unwrap(), cert);
    let report = witness::verify(&cert, small(), 100_000).unwrap();
    assert!(report.conclusion.established);

    let mut tampered = doc.clone();
    tampered.n = "21957".into();
    let report = witness::verify(&tampered.to_certificate().unwrap(), small(), 100_000).unwrap();
    assert!(!report.constants_consistent && !report.conclusion.established);
}

#[test]
fn runs_are_reproducible() {
    let req = request(&["a", "b", "aBA"], "ab", Mode::Paper, small());
    let a = witness::run(&req, 100_000).unwrap();
    let b = witness::run(&req, 100_000).unwrap();
    let doc = |o: &witness::WitnessOutcome| serde_json::to_string(&witness::OutcomeDocument::new(o, req.sampling)).unwrap();
    assert_eq!(doc(&a), doc(&b));
    assert!(a.conclusion.established);
}

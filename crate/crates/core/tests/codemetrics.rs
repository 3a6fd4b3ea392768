use std::fs;
use std::path::PathBuf;

use proptest::prelude::*;
use vsrq_core::codemetrics::{scan_source, scan_tree, FileMetrics, LanguageProfile};
use vsrq_core::config::{C_PROFILE, PYTHON_PROFILE};
use vsrq_core::indicators::Halstead;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/metrics")
}

fn c() -> LanguageProfile {
    LanguageProfile::from_json(C_PROFILE).unwrap()
}

fn scan_fixture(name: &str) -> FileMetrics {
    scan_source(&fs::read_to_string(fixtures().join(name)).unwrap(), &c())
}

#[test]
fn hand_counted_fixture() {
    let m = scan_fixture("clamp.c");
    assert_eq!((m.loc, m.blank_lines, m.comment_lines), (17, 2, 2));
    assert_eq!(m.halstead, Halstead { n1: 27, n2: 14, big_n1: 62, big_n2: 36 });
    assert_eq!(m.decision_points, 5);
}

#[test]
fn line_classes_of_small_file() {
    let m = scan_fixture("a.c");
    assert_eq!((m.loc, m.blank_lines, m.comment_lines), (3, 1, 1));
}

#[test]
fn one_of_each_loop_and_branch() {
    assert_eq!(scan_fixture("branches.c").decision_points, 3);
}

#[test]
fn python_profile_counts_hash_comments() {
    let py = LanguageProfile::from_json(PYTHON_PROFILE).unwrap();
    let m = scan_source("# top\nif a and b:\n    x = '#not'\n", &py);
    assert_eq!((m.loc, m.comment_lines), (2, 1));
    assert_eq!(m.decision_points, 2);
}

#[test]
fn rescans_are_identical() {
    let a = serde_json::to_string(&scan_tree(&fixtures(), &c(), None).unwrap()).unwrap();
    let b = serde_json::to_string(&scan_tree(&fixtures(), &c(), None).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn tree_totals_are_per_file_sums() {
    let r = scan_tree(&fixtures(), &c(), None).unwrap();
    assert_eq!(r.files.len(), 3);
    assert_eq!(r.skipped, ["clamp.counts.txt"]);
    let loc: u64 = r.files.iter().map(|f| f.metrics.loc).sum();
    assert_eq!(loc, 17 + 3 + 6);
}

const SNIPPETS: &[&str] = &[
    "int x = 1;\n",
    "\n",
    "// note\n",
    "/* a\n   b */\n",
    "if (a && b) { c++; }\n",
    "while (n--) s += \"str\";\n",
    "return x ? y : z;\n",
    "for (i = 0; i < 9; i++) {}\n",
    "char c = '\\'';\n",
];

fn arb_source() -> impl Strategy<Value = String> {
    proptest::collection::vec(proptest::sample::select(SNIPPETS), 0..12).prop_map(|v| v.concat())
}

proptest! {
    #[test]
    fn distinct_never_exceeds_total(src in arb_source()) {
        let m = scan_source(&src, &c());
        prop_assert!(m.halstead.n1 <= m.halstead.big_n1);
        prop_assert!(m.halstead.n2 <= m.halstead.big_n2);
    }

    #[test]
    fn concatenation_is_additive(a in arb_source(), b in arb_source()) {
        let (ma, mb) = (scan_source(&a, &c()), scan_source(&b, &c()));
        let joined = scan_source(&(a.clone() + &b), &c());
        prop_assert_eq!(joined.loc, ma.loc + mb.loc);
        prop_assert_eq!(joined.halstead.big_n1, ma.halstead.big_n1 + mb.halstead.big_n1);
        prop_assert_eq!(joined.halstead.big_n2, ma.halstead.big_n2 + mb.halstead.big_n2);
        prop_assert_eq!(joined.decision_points, ma.decision_points + mb.decision_points);
    }
}

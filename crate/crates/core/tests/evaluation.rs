use proptest::prelude::*;
use vsrq_core::evaluation::{
    confusion, curve_to_csv, format_percent, metrics, percent_2dp, risk_ratio_curve, ComponentScores, ConfusionMatrix,
    LabeledCorpus, LabeledItem,
};
use vsrq_core::{AssessmentConfig, BandLabel};

fn cm(tp: u64, fp: u64, tn: u64, fn_: u64) -> ConfusionMatrix {
    ConfusionMatrix { tp, fp, tn, fn_ }
}

fn close_pp(fraction: Option<f64>, pct: f64) -> bool {
    (fraction.unwrap() * 100.0 - pct).abs() <= 0.01
}

#[test]
fn published_comparison_columns() {
    // (tp, fp, tn, fn, accuracy, precision, recall)
    let cols = [
        (47, 78, 1542, 17, 94.36, 37.60, 73.43),
        (41, 103, 1517, 23, 92.52, 28.47, 64.06),
        (35, 92, 1528, 29, 92.81, 27.56, 54.69),
        (26, 137, 1483, 38, 89.61, 15.95, 40.63),
    ];
    for (tp, fp, tn, fn_, acc, prec, rec) in cols {
        let m = metrics(&cm(tp, fp, tn, fn_));
        assert!(close_pp(m.accuracy, acc), "{tp}: accuracy {:?}", m.accuracy);
        assert!(close_pp(m.precision, prec), "{tp}: precision {:?}", m.precision);
        assert!(close_pp(m.recall, rec), "{tp}: recall {:?}", m.recall);
    }
    assert_eq!(percent_2dp(metrics(&cm(47, 78, 1542, 17)).accuracy.unwrap()), 94.36);
}

#[test]
fn undefined_metrics_are_marked() {
    let m = metrics(&cm(0, 0, 0, 0));
    assert_eq!((m.accuracy, m.precision, m.recall), (None, None, None));
    assert_eq!(format_percent(m.precision), "undefined");
    let m = metrics(&cm(0, 0, 5, 0));
    assert_eq!(m.accuracy, Some(1.0));
    assert_eq!(m.precision, None);
}

#[test]
fn corpus_parsing_variants() {
    let text = "# comment\nid,predicted,actual,bugCount\na,1,1,3\nb, no , yes ,0\n\nc,-,0,0\n";
    let c = LabeledCorpus::parse(text).unwrap();
    assert_eq!(c.len(), 3);
    assert_eq!(c.items()[1].predicted, Some(false));
    assert!(c.items()[1].actual);
    assert_eq!(c.items()[2].predicted, None);
    assert!(confusion(&c).is_err());

    let tsv = LabeledCorpus::parse("x\t1\t0\t2\ny\t0\t0\t0\n").unwrap();
    assert_eq!(confusion(&tsv).unwrap(), cm(0, 1, 1, 0));

    let err = LabeledCorpus::parse("a,1,1,3\na,0,0,0\nb,maybe,1,1\n").unwrap_err();
    assert!(err.to_string().contains("line 3"), "{err}");
    assert!(LabeledCorpus::parse("a,1,1,3\na,0,0,0\n").is_err());
}

#[test]
fn predictions_derived_from_scores_and_curve() {
    let cfg = AssessmentConfig::builtin();
    let corpus = LabeledCorpus::parse("hot,-,1,4\nwarm,-,1,1\ncold,-,0,0\nfixed,1,0,0\n").unwrap();
    let scores = ComponentScores::from_json(
        r#"{"schemaVersion": 1, "scores": {"hot": 0.95, "warm": 0.55, "cold": 0.1, "fixed": 0.1}}"#,
    )
    .unwrap();
    let derived = corpus.with_derived_predictions(&scores, &cfg.vsr_bands, BandLabel::Serious).unwrap();
    let p: Vec<Option<bool>> = derived.items().iter().map(|i| i.predicted).collect();
    assert_eq!(p, [Some(true), Some(false), Some(false), Some(true)]);
    assert_eq!(confusion(&derived).unwrap(), cm(1, 1, 1, 1));

    let curve = risk_ratio_curve(&derived, &scores, &cfg.vsr_bands).unwrap();
    assert_eq!(curve.iter().map(|p| p.bug_count).collect::<Vec<_>>(), [0, 1, 4]);
    assert_eq!(curve[2].mean_ratio, 1.0);
    assert!(curve.windows(2).all(|w| w[0].mean_ratio <= w[1].mean_ratio));
    assert!(curve_to_csv(&curve).starts_with("bugCount,meanRatio,components\n0,"));

    let missing = corpus.with_derived_predictions(
        &ComponentScores::from_json(r#"{"schemaVersion": 1, "scores": {"hot": 0.9}}"#).unwrap(),
        &cfg.vsr_bands,
        BandLabel::Serious,
    );
    assert!(missing.unwrap_err().to_string().contains("warm"));
    assert!(ComponentScores::from_json(r#"{"schemaVersion": 1, "scores": {"x": 1.5}}"#).is_err());
}

#[test]
fn monotone_scores_give_a_rising_curve() {
    let cfg = AssessmentConfig::builtin();
    let mut lines = String::new();
    let mut scores = std::collections::BTreeMap::new();
    for k in 0..40u64 {
        let bugs = k / 4;
        lines.push_str(&format!("m{k},-,{},{bugs}\n", u8::from(bugs > 0)));
        scores.insert(format!("m{k}"), bugs as f64 / 10.0);
    }
    let corpus = LabeledCorpus::parse(&lines).unwrap();
    let s = ComponentScores { schema_version: 1, scores };
    let curve = risk_ratio_curve(&corpus, &s, &cfg.vsr_bands).unwrap();
    assert_eq!(curve.len(), 10);
    assert!(curve.windows(2).all(|w| w[0].mean_ratio <= w[1].mean_ratio));
}

fn arb_items() -> impl Strategy<Value = Vec<(bool, bool)>> {
    proptest::collection::vec((any::<bool>(), any::<bool>()), 0..80)
}

fn corpus_of(items: &[(bool, bool)]) -> LabeledCorpus {
    LabeledCorpus::new(
        items
            .iter()
            .enumerate()
            .map(|(k, &(p, a))| LabeledItem {
                id: format!("c{k}"),
                predicted: Some(p),
                actual: a,
                bug_count: u64::from(a),
            })
            .collect(),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn metrics_ignore_order(items in arb_items(), rot in 0usize..80) {
        let mut shuffled = items.clone();
        if !shuffled.is_empty() {
            let r = rot % shuffled.len();
            shuffled.rotate_left(r);
            shuffled.reverse();
        }
        let a = metrics(&confusion(&corpus_of(&items)).unwrap());
        let b = metrics(&confusion(&corpus_of(&shuffled)).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn metrics_stay_in_unit_interval(items in arb_items()) {
        let m = metrics(&confusion(&corpus_of(&items)).unwrap());
        for v in [m.accuracy, m.precision, m.recall].into_iter().flatten() {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn flipping_predictions_swaps_cells(items in arb_items()) {
        let base = confusion(&corpus_of(&items)).unwrap();
        let flipped: Vec<(bool, bool)> = items.iter().map(|&(p, a)| (!p, a)).collect();
        let f = confusion(&corpus_of(&flipped)).unwrap();
        prop_assert_eq!((f.tp, f.fn_, f.fp, f.tn), (base.fn_, base.tp, base.tn, base.fp));
    }

    #[test]
    fn flipping_actuals_swaps_cells(items in arb_items()) {
        let base = confusion(&corpus_of(&items)).unwrap();
        let flipped: Vec<(bool, bool)> = items.iter().map(|&(p, a)| (p, !a)).collect();
        let f = confusion(&corpus_of(&flipped)).unwrap();
        prop_assert_eq!((f.tp, f.fp, f.fn_, f.tn), (base.fp, base.tp, base.tn, base.fn_));
    }
}

use miriam_core::batch::{evaluate_corpus, parse_batch, parse_batch_sequential, parse_corpus};
use miriam_core::config::{Config, DEMO_PLAN};
use miriam_core::mission::load_plan;
use miriam_core::nlu::{IntentLabel, Nlu};

fn demo_nlu() -> Nlu {
    Config::bundled().nlu(&load_plan(DEMO_PLAN).unwrap())
}

#[test]
fn corpus_meets_accuracy_bar() {
    let entries = parse_corpus(include_str!("../data/intent_corpus.tsv"), "intent_corpus.tsv").unwrap();
    assert!(entries.len() >= 60);
    for intent in IntentLabel::ALL {
        let n = entries.iter().filter(|e| e.intent == intent).count();
        assert!(n >= 4, "{intent}: only {n} utterances");
    }
    let report = evaluate_corpus(&demo_nlu(), &entries);
    println!("{report}");
    assert!(report.accuracy() >= 0.95, "{report}");
    assert_eq!(report.literal_correct, report.literal_total, "{report}");
}

#[test]
fn parallel_and_sequential_batches_agree() {
    let entries = parse_corpus(include_str!("../data/intent_corpus.tsv"), "c").unwrap();
    let utterances: Vec<&str> = entries.iter().map(|e| e.utterance.as_str()).collect();
    let nlu = demo_nlu();
    assert_eq!(
        parse_batch(&nlu, &utterances),
        parse_batch_sequential(&nlu, &utterances)
    );
}

#[test]
fn corpus_format_errors_name_the_line() {
    let err = parse_corpus("ok\thelp\tliteral\nbad line\n", "c.tsv").unwrap_err();
    assert!(err.to_string().starts_with("c.tsv:2:"), "{err}");
}

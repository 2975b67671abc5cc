use ace_core::batch;
use ace_core::fixtures::{simplemat_lexicon, SIMPLEMAT_TEXT};
use ace_core::session::{split_sentences, Session};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn texts(n: usize) -> Vec<String> {
    let base = split_sentences(SIMPLEMAT_TEXT);
    base.iter().cycle().take(n).cloned().collect()
}

fn parse(c: &mut Criterion) {
    let lex = simplemat_lexicon();
    let texts = texts(400);
    let mut g = c.benchmark_group("parse_400");
    g.bench_function("parallel", |b| b.iter(|| batch::parse_all(&lex, black_box(&texts))));
    g.bench_function("sequential", |b| {
        b.iter(|| batch::parse_all_sequential(&lex, black_box(&texts)))
    });
    g.finish();
}

fn answer(c: &mut Criterion) {
    let mut s = Session::new(simplemat_lexicon());
    s.add(SIMPLEMAT_TEXT).unwrap();
    let qs: Vec<String> = [
        "Does SimpleMat check the personal code?",
        "Does SimpleMat reject the card?",
        "Who enters a card?",
        "What does SimpleMat check?",
    ]
    .iter()
    .cycle()
    .take(200)
    .map(|q| q.to_string())
    .collect();
    let mut g = c.benchmark_group("answer_200");
    g.bench_function("parallel", |b| b.iter(|| batch::answer_all(&s, black_box(&qs))));
    g.bench_function("sequential", |b| {
        b.iter(|| batch::answer_all_sequential(&s, black_box(&qs)))
    });
    g.finish();
}

criterion_group!(benches, parse, answer);
criterion_main!(benches);

// Placeholder; filled in once the pipeline exists.
use criterion::{criterion_group, criterion_main, Criterion};

fn pipeline_benches(_c: &mut Criterion) {}

criterion_group!(benches, pipeline_benches);
criterion_main!(benches);

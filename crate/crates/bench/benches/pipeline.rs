use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use robinlab::bounds::{truncated_cusp_run, TrendOptions};
use robinlab::levelsets::{interior_grid, level_table, DEFAULT_SLACK};
use robinlab::meshing::{triangulate, Grading};
use robinlab::profile::{candidate_profile, slice_profile, CandidateFamily};
use robinlab::solver::{minimize, RunParams, Source};
use robinlab::{PolygonDomain, ProfileFunction};

fn meshing(c: &mut Criterion) {
    let disk = PolygonDomain::regular_polygon(128, 1.0, 1.0).unwrap();
    c.bench_function("triangulate disk h=0.05", |b| {
        b.iter(|| triangulate(&disk, 0.05, Grading::none()).unwrap())
    });
}

fn solver(c: &mut Criterion) {
    let square = PolygonDomain::unit_square(1.0);
    let mesh = triangulate(&square, 0.05, Grading::none()).unwrap();
    let mut g = c.benchmark_group("solve square h=0.05");
    g.sample_size(10);
    for p in [2.0, 3.0] {
        let params = RunParams::new(p, Source::Constant(1.0));
        g.bench_function(format!("p={p}"), |b| {
            b.iter_batched(|| mesh.clone(), |m| minimize(m, &params, &[]).unwrap(), BatchSize::SmallInput)
        });
    }
    g.finish();
    let mut g = c.benchmark_group("truncated cusp");
    g.sample_size(10);
    g.bench_function("alpha=3 delta=0.05", |b| {
        b.iter(|| truncated_cusp_run(&ProfileFunction::power(3.0), 2.0, 1.0, 0.05, &TrendOptions::default()).unwrap())
    });
    g.finish();
}

fn analysis(c: &mut Criterion) {
    let square = PolygonDomain::unit_square(1.0);
    let field = minimize(
        triangulate(&square, 0.05, Grading::none()).unwrap(),
        &RunParams::new(2.0, Source::Constant(1.0)),
        &[],
    )
    .unwrap();
    let ts = interior_grid(field.min(), field.max(), 20);
    c.bench_function("level table 20 levels", |b| b.iter(|| level_table(&field, &ts, DEFAULT_SLACK)));
    c.bench_function("candidate profile square", |b| {
        b.iter(|| candidate_profile(&square, 2.0, &CandidateFamily::ALL).unwrap())
    });
    c.bench_function("slice profile alpha=2", |b| {
        b.iter(|| slice_profile(&ProfileFunction::power(2.0), 2, 2.0, None).unwrap())
    });
}

criterion_group!(benches, meshing, solver, analysis);
criterion_main!(benches);

//! Sequential vs rayon batch evaluation on independent kernel jobs.
//!
//! Each job works on a fresh clone of the Lubin-Tate data so memo tables
//! start cold and repeated iterations measure the same work.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ltphi_core::batch;
use ltphi_core::lubin_tate::LubinTateData;
use ltphi_core::padic::PadicScalar;

fn endomorphisms(c: &mut Criterion) {
    let lt = LubinTateData::standard(3, 2, 12).unwrap();
    let ctx = lt.ctx();
    let e = ctx.emax() as i32;
    let jobs: Vec<PadicScalar> = (0..16)
        .map(|i| PadicScalar::from_coeffs(ctx, &[7 + 13 * i, 5 * i - 2], e).unwrap())
        .collect();
    let job = |a: &PadicScalar| lt.clone().mult_by(a, 30).unwrap();

    let mut g = c.benchmark_group("mult_by x16");
    g.sample_size(10);
    g.bench_function(BenchmarkId::new("map_seq", 16), |b| b.iter(|| batch::map_seq(&jobs, job)));
    g.bench_function(BenchmarkId::new("map_par", 16), |b| b.iter(|| batch::map_par(&jobs, job)));
    g.finish();
}

criterion_group!(benches, endomorphisms);
criterion_main!(benches);

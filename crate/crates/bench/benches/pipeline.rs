use std::collections::BTreeMap;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use terwilliger_bench::{orbitals, scheme};
use terwilliger_core::centralizer::OrbitalAlgebra;
use terwilliger_core::exactla::{FieldCtx, RankTracker, SparseVec};
use terwilliger_core::scheme::intersection_numbers;
use terwilliger_core::switching::{run_to_stationary, OrbitalRoute};

const P: u64 = 2_147_483_629;

fn bench_intersection_numbers(c: &mut Criterion) {
    let s = scheme(5);
    c.bench_function("intersection numbers S5", |b| b.iter(|| intersection_numbers(black_box(&s))));
}

fn bench_rank_tracker(c: &mut Criterion) {
    let field = FieldCtx::new(P).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let dim = 400;
    let rows: Vec<SparseVec> = (0..dim)
        .map(|_| {
            let entries: BTreeMap<u32, u32> =
                (0..12).map(|_| (rng.gen_range(0..dim as u32), rng.gen_range(1..P as u32))).collect();
            SparseVec::from_entries(dim, entries.into_iter().collect()).unwrap()
        })
        .collect();
    c.bench_function("rank tracker 400 sparse rows", |b| {
        b.iter(|| {
            let mut t = RankTracker::new(field, dim);
            for r in &rows {
                t.insert(r).unwrap();
            }
            t.rank()
        })
    });
}

fn bench_orbitals(c: &mut Criterion) {
    let s = scheme(6);
    c.bench_function("orbitals S6", |b| b.iter(|| orbitals(black_box(&s)).total()));
}

fn bench_closure(c: &mut Criterion) {
    let field = FieldCtx::new(P).unwrap();
    for n in [5, 6] {
        let s = scheme(n);
        let orb = orbitals(&s);
        let algebra = OrbitalAlgebra::new(&s.group, &s.classes, &orb);
        let route = OrbitalRoute { algebra: &algebra };
        c.bench_function(&format!("closure S{n}"), |b| {
            b.iter(|| run_to_stationary(&route, field, 6, None).unwrap().basis.total_dim())
        });
    }
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_intersection_numbers, bench_rank_tracker, bench_orbitals, bench_closure
}
criterion_main!(benches);

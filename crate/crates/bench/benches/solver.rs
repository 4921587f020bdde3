use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rig_core::{generate, solve_buchi, solve_reach, Arena, Objective};

fn cascade(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_reach/cascade");
    for levels in [4, 9, 19, 39, 79] {
        let arena = generate::cascade(levels);
        group.bench_with_input(BenchmarkId::from_parameter(arena.num_states()), &arena, |b, a| {
            b.iter(|| solve_reach(a))
        });
    }
    group.finish();
}

fn random(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let arenas: Vec<(Arena, Arena)> = (0..20)
        .map(|_| {
            let am = generate::random_actmap(&mut rng, 2, 2, 4);
            let inst = generate::observation_game(&mut rng, 6, am, 2, 0.3);
            (
                Arena::build(&inst.game, &inst.morphism, Objective::Reach).unwrap(),
                Arena::build(&inst.game, &inst.morphism, Objective::Buchi).unwrap(),
            )
        })
        .collect();
    c.bench_function("solve_reach/observation-20", |b| {
        b.iter(|| arenas.iter().map(|(r, _)| solve_reach(r).winning).filter(|&w| w).count())
    });
    c.bench_function("solve_buchi/observation-20", |b| {
        b.iter(|| arenas.iter().map(|(_, u)| solve_buchi(u).winning).filter(|&w| w).count())
    });
}

criterion_group!(benches, cascade, random);
criterion_main!(benches);

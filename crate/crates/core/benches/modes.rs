//! Sequential against rayon execution on the heavy inner loops. Without the
//! `parallel` feature both arms run sequentially.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use snakelab::exec::{self, Mode};
use snakelab::qcharacter::{enumerate_prime_snakes, snake_char};
use snakelab::{LWeight, PrimeSnake};

fn modes(c: &mut Criterion) {
    let snake = PrimeSnake::from_lweight(&LWeight::parse_compact(5, "3:0,3:2,3:4").unwrap()).unwrap();
    let chi = snake_char(&snake).unwrap();
    let small = enumerate_prime_snakes(4, 2, 8);

    let mut g = c.benchmark_group("modes");
    g.sample_size(10);
    for mode in [Mode::Sequential, Mode::Parallel] {
        let tag = format!("{mode:?}");
        g.bench_with_input(BenchmarkId::new("snake_char", &tag), &mode, |b, &m| {
            b.iter(|| exec::with_mode(m, || snake_char(&snake).unwrap()))
        });
        g.bench_with_input(BenchmarkId::new("character_mul", &tag), &mode, |b, &m| {
            b.iter(|| exec::with_mode(m, || chi.mul(&chi).unwrap()))
        });
        g.bench_with_input(BenchmarkId::new("snake_sweep", &tag), &mode, |b, &m| {
            b.iter(|| exec::with_mode(m, || exec::map(&small, |s| snake_char(s).unwrap().len())))
        });
    }
    g.finish();
}

criterion_group!(benches, modes);
criterion_main!(benches);

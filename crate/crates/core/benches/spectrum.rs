use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use semitoric::inverse::convergence_study;
use semitoric::quantum::{joint_spectrum, tridiag_eigenvalues_with, BandMatrix, QuantumParams, Solver};
use semitoric::Exec;

const POLICIES: [(&str, Exec); 2] = [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)];

fn sigma(c: &mut Criterion) {
    let mut g = c.benchmark_group("sigma_n");
    for n in [129u32, 513] {
        let m = BandMatrix::for_index(&QuantumParams::new(n), u64::from(n));
        for (name, exec) in POLICIES {
            for (solver_name, solver) in [("reference", Solver::Reference), ("half", Solver::HalfSpectrum)] {
                g.bench_with_input(BenchmarkId::new(format!("{name}/{solver_name}"), n), &m, |b, m| {
                    b.iter(|| tridiag_eigenvalues_with(m, 1e-15, solver, exec))
                });
            }
        }
    }
    g.finish();
}

fn joint(c: &mut Criterion) {
    let mut g = c.benchmark_group("joint_spectrum");
    g.sample_size(10);
    let p = QuantumParams::new(55);
    for (name, exec) in POLICIES {
        g.bench_function(name, |b| b.iter(|| joint_spectrum(&p, -1.0, 3.0, 1e-15, exec).unwrap()));
    }
    g.finish();
}

fn study(c: &mut Criterion) {
    let mut g = c.benchmark_group("convergence_study");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        g.bench_function(name, |b| b.iter(|| convergence_study(1, 7, true, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, sigma, joint, study);
criterion_main!(benches);

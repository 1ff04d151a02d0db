use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_complex::Complex64 as c64;
use polariton_bench::{axis, echo_pulses, lower_polariton_start, reference, reference_dynamics};
use polariton_core::liouvillian::{assemble_excited_generator, spectral_decompose};
use polariton_core::oracle::Rk4Integrator;
use polariton_core::signals::{
    dipole_distribution, trps, InitialPopulation, LargeEnsemble, Pulse, TrpsOptions, TwoDimOptions,
    twodir,
};

fn liouvillian(c: &mut Criterion) {
    let p = reference();
    c.bench_function("assemble excited generator (N = 3)", |b| {
        b.iter(|| assemble_excited_generator(black_box(&p)))
    });
    let gen = assemble_excited_generator(&p);
    c.bench_function("spectral decomposition (dim 128)", |b| {
        b.iter(|| spectral_decompose(black_box(&gen)).unwrap())
    });
}

fn propagation(c: &mut Criterion) {
    let d = reference_dynamics();
    let s0 = lower_polariton_start(&d);
    c.bench_function("spectral propagation to 100 ps", |b| {
        b.iter(|| d.evolve_to(black_box(&s0), 100.0).unwrap())
    });
    let rk = Rk4Integrator::new(&d.params).unwrap();
    let mut v: Vec<c64> = s0.to_full_vector();
    c.bench_function("RK4 step", |b| b.iter(|| rk.step(black_box(&mut v), 1e-3)));
}

fn spectra(c: &mut Criterion) {
    let d = reference_dynamics();
    let s = d.evolve_to(&lower_polariton_start(&d), 20.0).unwrap();
    let probe = Pulse::gaussian(1993.0, 50.0);
    let omega = axis(3001);
    c.bench_function("TRPS, 3001 points", |b| {
        b.iter(|| trps(&d.params, &d.eigensystems, &s, &probe, &probe, &omega, &TrpsOptions::default()).unwrap())
    });

    let pulses = echo_pulses();
    let grid = axis(200);
    let mut group = c.benchmark_group("2D-IR");
    group.sample_size(10);
    group.bench_function("200 x 200, thermal, T2 = 5 ps", |b| {
        b.iter(|| {
            twodir(&d, &pulses, 5.0, &grid, &grid, InitialPopulation::Thermal, &TwoDimOptions::default()).unwrap()
        })
    });
    group.finish();
}

fn dipoles(c: &mut Criterion) {
    let p = reference();
    let ens = LargeEnsemble {
        n: 4137,
        collective_coupling: 19.0,
        detuned_count: 130,
        detuning: 18.0,
    };
    c.bench_function("dipole distribution, N = 4137", |b| {
        b.iter(|| dipole_distribution(black_box(&ens), &p, &[1.0, 0.0, 0.0]).unwrap())
    });
}

criterion_group!(benches, liouvillian, propagation, spectra, dipoles);
criterion_main!(benches);

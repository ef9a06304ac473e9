//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use minkowski_fdm::geometry::{cell_count, Similarity};
use minkowski_fdm::laplacian::{edge_energy, quadratic_form};
use minkowski_fdm::scalar::{max_norm, max_norm_diff};
use minkowski_fdm::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MATL_1: [[f64; 9]; 9] = [
    [1., -1., 0., 0., 0., 0., 0., 0., 0.],
    [-1., 2., -1., 0., 0., 0., 0., 0., 0.],
    [0., -1., 2., -1., 0., 0., 0., 0., 0.],
    [0., 0., -1., 2., -1., 0., 0., 0., 0.],
    [0., 0., 0., -1., 2., -1., 0., 0., 0.],
    [0., 0., 0., 0., -1., 2., -1., 0., 0.],
    [0., 0., 0., 0., 0., -1., 2., -1., 0.],
    [0., 0., 0., 0., 0., 0., -1., 2., -1.],
    [0., 0., 0., 0., 0., 0., 0., -1., 1.],
];

const AAH_10_10_1_9: [[f64; 9]; 9] = [
    [-63., 64., 0., 0., 0., 0., 0., 0., 0.],
    [64., -127., 64., 0., 0., 0., 0., 0., 0.],
    [0., 64., -127., 64., 0., 0., 0., 0., 0.],
    [0., 0., 64., -127., 64., 0., 0., 0., 0.],
    [0., 0., 0., 64., -127., 64., 0., 0., 0.],
    [0., 0., 0., 0., 64., -127., 64., 0., 0.],
    [0., 0., 0., 0., 0., 64., -127., 64., 0.],
    [0., 0., 0., 0., 0., 0., 64., -127., 64.],
    [0., 0., 0., 0., 0., 0., 0., 64., -63.],
];

const INITV_1: [(f64, f64); 9] = [
    (0.0, 0.0),
    (0.25, 0.0),
    (0.25, 0.25),
    (0.5, 0.25),
    (0.5, 0.0),
    (0.5, -0.25),
    (0.75, -0.25),
    (0.75, 0.0),
    (1.0, 0.0),
];

fn timed<R>(f: impl FnOnce() -> R) -> (R, Duration) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed())
}

fn dense_eq(got: &Matrix, want: &[[f64; 9]; 9]) {
    assert_eq!(got.dim(), 9);
    for (r, row) in want.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            assert_eq!(got.get(r, c), v, "entry ({r},{c})");
        }
    }
}

fn ac1_matl() {
    let (l, dt) = timed(|| laplacian_matrix::<f64>(1).unwrap());
    dense_eq(&l, &MATL_1);
    assert!(dt < Duration::from_millis(1), "took {dt:?}");
}

fn ac2_initv() {
    let (g, dt) = timed(|| build_graph::<f64>(1).unwrap());
    let got: Vec<_> = g.points().iter().map(|p| (p.x, p.y)).collect();
    assert_eq!(got, INITV_1);
    assert!(dt < Duration::from_millis(1), "took {dt:?}");
}

fn ac3_aah() {
    // AAH[N = 10, T = 10, k = 1, n = 9]: h = T / N = 1.
    let cfg = Config::new(1, 10.0, 10, Initial::Zero);
    let a = heat_step_matrix(1, &cfg.step_size()).unwrap();
    dense_eq(&a, &AAH_10_10_1_9);
}

fn ac4_harmonic() {
    let w: Word = "121".parse().unwrap();
    assert_eq!(
        harmonic_at(&Boundary::new(0.0, 1.0), &w, Corner::P0),
        1.0 / 64.0
    );
}

fn ac5_geometry() {
    let (_, dt) = timed(|| {
        let p0 = Point::p0();
        let p1 = Point::p1();
        for i in 1..8u8 {
            assert_eq!(apply_map(i + 1, &p0).unwrap(), apply_map(i, &p1).unwrap());
        }
        let graphs: Vec<Graph> = (0..=4).map(|m| build_graph(m).unwrap()).collect();
        for m in 0..4 {
            let (coarse, fine) = (&graphs[m], &graphs[m + 1]);
            for (i, p) in coarse.points().iter().enumerate() {
                assert_eq!(fine.point(8 * i), p);
            }
        }
        for (m, g) in graphs.iter().enumerate() {
            let edge2 = 16f64.powi(-(m as i32));
            for w in g.points().windows(2) {
                assert_eq!(w[0].distance_squared(&w[1]), edge2);
            }
        }
        for len in 0..=3u32 {
            for w in enumerate_words(len).unwrap() {
                for j in 2..=8u8 {
                    let left = apply_word(&w.extended(j).unwrap(), &p0);
                    let right = apply_word(&w.extended(j - 1).unwrap(), &p1);
                    assert_eq!(left, right, "w={w} j={j}");
                }
            }
        }
    });
    assert!(dt < Duration::from_secs(1), "took {dt:?}");
}

fn ac6_laplacian() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for m in 0..=5u32 {
        let l = laplacian_matrix::<f64>(m).unwrap();
        let n = l.dim();
        let ones = vec![1.0; n];
        assert!(l.apply(&ones).unwrap().iter().all(|&x| x == 0.0));

        let lin: Vec<f64> = (0..n).map(|i| i as f64 / cell_count(m) as f64).collect();
        let out = l.apply(&lin).unwrap();
        assert!(out[1..n - 1].iter().all(|&x| x == 0.0), "m={m}");

        for _ in 0..100 {
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let qf = quadratic_form(&l, &v).unwrap();
            let es = edge_energy(&v);
            assert!(qf >= 0.0);
            assert!(
                (qf - es).abs() <= 1e-12 * es.abs().max(f64::MIN_POSITIVE),
                "m={m}"
            );
        }
    }
    for m in 0..=3u32 {
        let l = laplacian_matrix::<f64>(m).unwrap();
        assert!(l.eigenvalue(1, &1e-12).unwrap() > 0.0, "m={m}");
    }
}

fn ac7_heat_oracle() {
    let (m, steps, horizon, j) = (1u32, 100usize, 0.1, 4usize);
    let cfg = Config::new(m, horizon, steps, Initial::Impulse(j)).with_snapshots(vec![steps]);
    let got = heat_solve(&cfg).unwrap();

    // B = P (I - h 64 MatL), P zeroing the boundary rows; then B^N e_j by
    // repeated squaring.
    let h = horizon / steps as f64;
    let n = 9;
    let mut b = vec![vec![0.0; n]; n];
    for i in 1..n - 1 {
        b[i][i] = 1.0 - 2.0 * 64.0 * h;
        b[i][i - 1] = 64.0 * h;
        b[i][i + 1] = 64.0 * h;
    }
    let mul = |x: &Vec<Vec<f64>>, y: &Vec<Vec<f64>>| {
        let mut z = vec![vec![0.0; n]; n];
        for r in 0..n {
            for c in 0..n {
                z[r][c] = (0..n).map(|k| x[r][k] * y[k][c]).sum();
            }
        }
        z
    };
    let mut pow = vec![vec![0.0; n]; n];
    for (i, row) in pow.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let (mut base, mut e) = (b, steps);
    while e > 0 {
        if e & 1 == 1 {
            pow = mul(&pow, &base);
        }
        base = mul(&base, &base);
        e >>= 1;
    }
    let oracle: Vec<f64> = (0..n).map(|r| pow[r][j]).collect();
    let last = got.last().unwrap();
    assert_eq!(last.step, steps);
    let err = max_norm_diff(&last.values, &oracle);
    assert!(err <= 1e-10, "max-norm difference {err:e}");
}

fn ac8_wave_reversal() {
    let (err, dt) = timed(|| {
        let cfg = Config::new(2, 10.0, 1000, Initial::Impulse(32));
        wave_reversal_error(&cfg).unwrap()
    });
    assert!(err <= 1e-8, "recovery error {err:e}");
    assert!(dt < Duration::from_secs(5), "took {dt:?}");
}

fn ac9_stability() {
    let mut run = HeatIntegrator::new(1, &1.0, Initial::Impulse(4).evaluate(1).unwrap()).unwrap();
    let start = max_norm(run.state());
    let mut grew = false;
    for _ in 0..10 {
        run.step().unwrap();
        if max_norm(run.state()) >= 10.0 * start {
            grew = true;
            break;
        }
    }
    assert!(grew, "no tenfold growth within 10 steps at ratio 64");

    let h = 1e-6_f64;
    let report = stability_check(Scheme::Heat, 3, &h).unwrap();
    assert!((report.ratio - 0.262144).abs() < 1e-12 && report.stable);
    let mut run = HeatIntegrator::new(3, &h, Initial::Impulse(256).evaluate(3).unwrap()).unwrap();
    let mut last = max_norm(run.state());
    for k in 0..10_000 {
        run.step().unwrap();
        let now = max_norm(run.state());
        assert!(now <= last, "max-norm increased at step {}", k + 1);
        last = now;
    }
}

fn ac10_dirichlet() {
    for m in 1..=5u32 {
        let p = Dirichlet::new(m, DEFAULT_Q, Boundary::new(0.0, 1.0));
        let sol = solve_dirichlet(&p).unwrap();
        assert!(sol.residual <= 1e-10, "m={m} residual {:e}", sol.residual);
        let r = dirichlet_error(&p).unwrap();
        assert!(r.error <= 1e-9, "m={m} E_m {:e}", r.error);
    }
}

fn ac11_bounds() {
    let rel = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs();
    let p = Holder::new(1.0, 1.0).unwrap();
    // 1 / (1 - 4^-1) = 4/3.
    let cases = [
        (heat_holder_bound(&p, 0, 1.0).unwrap(), 4.0 / 3.0),
        (
            heat_holder_bound(&p, 3, 1e-6).unwrap(),
            262_144.0 * 1e-6 * 4.0 / 3.0,
        ),
        (wave_holder_bound(&p, 0, 1.0).unwrap(), 4.0 / 3.0),
        (
            wave_holder_bound(&p, 2, 1e-2).unwrap(),
            4096.0 * 1e-4 * 4.0 / 3.0,
        ),
    ];
    for (got, want) in cases {
        assert!(rel(got, want), "{got} vs {want}");
    }
    for (m, h) in [(0u32, 1.0), (2, 1e-2), (3, 1e-6), (5, 3e-8)] {
        let heat = heat_holder_bound(&p, m, h).unwrap();
        assert!(rel(wave_holder_bound(&p, m, h).unwrap(), heat * h));
    }
    assert_eq!(Similarity::ratio::<f64>(), 0.25);
}

fn main() -> ExitCode {
    let criteria: [(&str, fn()); 11] = [
        ("AC1  MatL[1] reproduced exactly (<1 ms)", ac1_matl),
        ("AC2  InitV[1] reproduced exactly (<1 ms)", ac2_initv),
        ("AC3  AAH[10,10,1,9] reproduced exactly", ac3_aah),
        ("AC4  HadresseH[0,1,{1,2,1},p0] = 1/64", ac4_harmonic),
        ("AC5  geometry properties, m <= 4 (<1 s)", ac5_geometry),
        ("AC6  Laplacian properties, m <= 5", ac6_laplacian),
        (
            "AC7  heat vs dense matrix power, m=1 N=100 (1e-10)",
            ac7_heat_oracle,
        ),
        (
            "AC8  wave reversibility, m=2 N=1000 (1e-8, <5 s)",
            ac8_wave_reversal,
        ),
        (
            "AC9  stability dichotomy (ratio 64 vs 0.262)",
            ac9_stability,
        ),
        (
            "AC10 Dirichlet E_m <= 1e-9, residual <= 1e-10, m=1..5",
            ac10_dirichlet,
        ),
        (
            "AC11 Hölder bounds (1e-12 rel), wave = heat * h",
            ac11_bounds,
        ),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, f) in criteria {
        match catch_unwind(AssertUnwindSafe(f)) {
            Ok(()) => println!("PASS  {name}"),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL  {name}: {msg}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

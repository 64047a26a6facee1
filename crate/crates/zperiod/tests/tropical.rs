use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use zperiod::ade::AdeType;
use zperiod::families::{exceptional, tensor, twist, EXCEPTIONAL_NAMES};
use zperiod::tropical::*;
use zperiod::{is_admissible, BipartiteQuiver};

fn a3a1() -> BipartiteQuiver {
    tensor(AdeType::a(3), AdeType::a(1)).into_quiver()
}

// rows t = 0..=13 of the A3 ⊗ A1 example; None where t + ε_v is odd
const LAMBDA_ORBIT: [[Option<i64>; 3]; 14] = [
    [Some(3), None, Some(7)],
    [None, Some(-2), None],
    [Some(-3), None, Some(-7)],
    [None, Some(2), None],
    [Some(5), None, Some(9)],
    [None, Some(12), None],
    [Some(7), None, Some(3)],
    [None, Some(-2), None],
    [Some(-7), None, Some(-3)],
    [None, Some(2), None],
    [Some(9), None, Some(5)],
    [None, Some(12), None],
    [Some(3), None, Some(7)],
    [None, Some(-2), None],
];

#[test]
fn lambda_orbit_values() {
    let g = a3a1();
    let tr = trajectory::<i64>(&g, &[3, -2, 7], 0, 13).unwrap();
    for (t, row) in LAMBDA_ORBIT.iter().enumerate() {
        for (v, cell) in row.iter().enumerate() {
            if let Some(x) = cell {
                assert_eq!(tr.value(v, t as i64), x, "t={t} v={v}");
            }
        }
    }
}

#[test]
fn delta_sweep_values() {
    // (u, t, values over a, b, c) with 9 marking absent cells
    let expected: [[[i64; 3]; 14]; 3] = [
        [
            [1, 9, 0], [9, 0, 9], [-1, 9, 0], [9, 0, 9], [1, 9, 0], [9, 1, 9], [0, 9, 1],
            [9, 0, 9], [0, 9, -1], [9, 0, 9], [0, 9, 1], [9, 1, 9], [1, 9, 0], [9, 0, 9],
        ],
        [
            [0, 9, 0], [9, 1, 9], [1, 9, 1], [9, 1, 9], [0, 9, 0], [9, -1, 9], [0, 9, 0],
            [9, 1, 9], [1, 9, 1], [9, 1, 9], [0, 9, 0], [9, -1, 9], [0, 9, 0], [9, 1, 9],
        ],
        [
            [0, 9, 1], [9, 0, 9], [0, 9, -1], [9, 0, 9], [0, 9, 1], [9, 1, 9], [1, 9, 0],
            [9, 0, 9], [-1, 9, 0], [9, 0, 9], [1, 9, 0], [9, 1, 9], [0, 9, 1], [9, 0, 9],
        ],
    ];
    let g = a3a1();
    let sweep = delta_sweep(&g, 0, 13).unwrap();
    for u in 0..3 {
        for t in 0..14 {
            for v in 0..3 {
                let e = expected[u][t][v];
                if e != 9 {
                    assert_eq!(*sweep[u].value(v, t as i64), BigInt::from(e), "u={u} t={t} v={v}");
                }
            }
        }
    }
}

#[test]
fn tsv_dump_lists_live_cells() {
    let g = a3a1();
    let tr = trajectory::<i64>(&g, &[3, -2, 7], 0, 3).unwrap();
    assert_eq!(
        trajectory_tsv(&g, &tr, 0),
        "t\tvertex\tvalue\n0\tr1c1\t3\n0\tr3c1\t7\n1\tr2c1\t-2\n2\tr1c1\t-3\n2\tr3c1\t-7\n3\tr2c1\t2\n"
    );
}

#[test]
fn rational_run_matches_integer_run() {
    let g = a3a1();
    let lam: Vec<BigRational> = [3, -2, 7].iter().map(|&x| BigRational::from_integer(x.into())).collect();
    let states = tropical_run(&g, &lam, 12).unwrap();
    assert_eq!(states.len(), 13);
    assert_eq!(states[12].values, states[0].values);
    assert_eq!(states[1].values, lam);
    assert_eq!(states[5].values[1], BigRational::from_integer(12.into()));
}

#[test]
fn small_periods() {
    let g = tensor(AdeType::a(2), AdeType::a(2));
    assert!(!verify_tropical_periodicity(&g, 5).unwrap());
    assert!(verify_tropical_periodicity(&g, 6).unwrap());
    assert!(verify_tropical_periodicity(&a3a1(), 6).unwrap());
    assert!(!verify_tropical_periodicity(&a3a1(), 5).unwrap());
}

#[test]
fn minimal_period_divides_coxeter_sum() {
    for g in [tensor(AdeType::a(3), AdeType::a(2)), twist(AdeType::a(3)), tensor(AdeType::d(4), AdeType::a(2))] {
        let (h, hp) = is_admissible(&g).coxeter_pair().unwrap();
        let p = minimal_period(&g, 2 * (h + hp) as usize).unwrap().unwrap();
        assert_eq!((h + hp) as usize % p, 0);
    }
}

#[test]
fn exceptional_periods() {
    for name in EXCEPTIONAL_NAMES {
        let g = exceptional(name).unwrap();
        let (h, hp) = is_admissible(&g).coxeter_pair().unwrap();
        assert!(verify_tropical_periodicity(&g, (h + hp) as usize).unwrap(), "{name}");
    }
}

#[test]
fn closed_form_matches_engine() {
    for n in 1..=5usize {
        for m in 1..=5usize {
            let g = tensor(AdeType::a(n), AdeType::a(m));
            let sweep = delta_sweep(&g, 0, (n + m) as i64).unwrap();
            for a in 1..=n {
                for b in 1..=m {
                    if (a + b) % 2 == 0 {
                        continue;
                    }
                    let u = g.index_of(&format!("r{a}c{b}")).unwrap();
                    for t in 1..=n + m {
                        let cf = aa_closed_form(n, m, a, b, t).unwrap();
                        for (id, want) in cf {
                            let v = g.index_of(&id).unwrap();
                            assert_eq!(*sweep[u].slice(t as i64).get(v).unwrap(), BigInt::from(want), "n={n} m={m} a={a} b={b} t={t} v={id}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn closed_form_ends_on_opposite_vertex() {
    let cf = aa_closed_form(4, 5, 2, 3, 9).unwrap();
    let ones: Vec<_> = cf.iter().filter(|(_, &x)| x == 1).map(|(k, _)| k.as_str()).collect();
    assert_eq!(ones, vec!["r3c3"]);
}

#[test]
fn time_reversal_on_grids() {
    // For ε_u = 1 the orbit of δ_{v(a,b)} passes through −δ_{v(ā,b̄)} and then
    // follows the orbit of δ_{v(ā,b̄)}.
    for n in 1..=5usize {
        for m in 1..=5usize {
            let g = tensor(AdeType::a(n), AdeType::a(m));
            let span = 2 * (n + m + 2) as i64;
            let sweep = delta_sweep(&g, -span, 2 * span).unwrap();
            for a in 1..=n {
                for b in 1..=m {
                    if (a + b) % 2 == 0 {
                        continue;
                    }
                    let u = g.index_of(&format!("r{a}c{b}")).unwrap();
                    let w = g.index_of(&format!("r{}c{}", n + 1 - a, m + 1 - b)).unwrap();
                    let nm = (n + m) as i64;
                    let mut neg = vec![BigInt::from(0); g.len()];
                    neg[w] = BigInt::from(-1);
                    assert_eq!(sweep[u].slice(nm + 1), &neg[..]);
                    assert_eq!(sweep[u].slice(nm + 2), &neg[..]);
                    if g.eps()[w] == 1 {
                        // n + m even: a plain shift by n + m + 2
                        for t in -span..=span {
                            assert_eq!(sweep[u].slice(t + nm + 2), sweep[w].slice(t), "n={n} m={m} a={a} b={b} t={t}");
                        }
                    } else {
                        // n + m odd: the shift is odd, so the match is a reflection in time
                        let c = nm + 3;
                        for tau in -span + c..=span {
                            for v in 0..g.len() {
                                if (tau + g.eps()[v] as i64) % 2 == 0 {
                                    assert_eq!(sweep[u].value(v, tau), sweep[w].value(v, c - tau), "n={n} m={m} a={a} b={b} tau={tau}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn doubled_arrows_break_periodicity() {
    let g = tensor(AdeType::a(2), AdeType::a(2)).into_quiver().scale_multiplicities(2);
    let ones = vec![1i64; 4];
    let tr = trajectory(&g, &ones, 0, 100).unwrap();
    for t in 0..=100 {
        assert!(tr.slice(t).iter().all(|&x| x == 1));
    }
    // with two copies the δ-orbits grow quadratically
    let big = trajectory::<BigInt>(&g, &delta(4, 0), 0, 100).unwrap();
    let peaks: Vec<BigInt> = (0..=100).map(|t| big.slice(t).iter().max().unwrap().clone()).collect();
    assert!(peaks[100] > BigInt::from(2000) && peaks[100] < BigInt::from(3000));
    for t in (8..=96).step_by(4) {
        assert!(peaks[t + 4] > peaks[t]);
    }
    assert!(!verify_tropical_periodicity(&g, 6).unwrap());
    assert_eq!(minimal_period(&g, 24).unwrap(), None);

    // with three copies they grow exponentially
    let g3 = tensor(AdeType::a(2), AdeType::a(2)).into_quiver().scale_multiplicities(3);
    let big = trajectory::<BigInt>(&g3, &delta(4, 0), 0, 100).unwrap();
    let first = (0..=100).find(|&t| big.slice(t).iter().any(|x| *x > BigInt::from(1_000_000))).unwrap();
    assert_eq!(first, 19);
}

#[test]
fn ascii_frames_render_grid() {
    let g = tensor(AdeType::a(2), AdeType::a(3)).into_quiver();
    let tr = trajectory::<i64>(&g, &delta(6, g.index_of("r1c2").unwrap()), 0, 1).unwrap();
    let s = render_frames(&g, &tr, 1);
    assert_eq!(s, "t = 1\n  . 1 .\n  . . .\n");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn arbitrary_rational_data_is_periodic(
        nums in proptest::collection::vec(-50i64..50, 6),
        dens in proptest::collection::vec(1i64..7, 6),
        pick in 0usize..3,
    ) {
        let g = [tensor(AdeType::a(3), AdeType::a(2)), twist(AdeType::a(3)), tensor(AdeType::a(2), AdeType::a(3))][pick].clone();
        let (h, hp) = is_admissible(&g).coxeter_pair().unwrap();
        let per = 2 * (h + hp) as i64;
        let lam: Vec<BigRational> = nums.iter().zip(&dens).map(|(&p, &q)| BigRational::new(p.into(), q.into())).collect();
        let tr = trajectory(&g, &lam, -per, 3 * per + 1).unwrap();
        for t in -per..=2 * per {
            prop_assert_eq!(tr.slice(t), tr.slice(t + per));
        }
    }

    #[test]
    fn step_is_an_involution(nums in proptest::collection::vec(-1000i64..1000, 6), color in 0u8..2) {
        let g = tensor(AdeType::a(3), AdeType::a(2));
        let once = step(&g, &nums, color).unwrap();
        prop_assert_eq!(step(&g, &once, color).unwrap(), nums);
    }
}

use carpet_core::moduli::{
    annulus_disk_bound, annulus_modulus, inequality_margins, levels_from_moduli, mcmullen_annulus_check,
    separating_circle_bound, solve_moduli,
};
use carpet_core::trees::{builtin_tree, is_unobstructed, TreeKind};
use carpet_core::Error;

fn weight_tuples() -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for a in 1..=5 {
        for b in 1..=5 {
            for c in 1..=5 {
                for d in 1..=5 {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

#[test]
fn margins_positive_exactly_when_unobstructed() {
    for w in weight_tuples() {
        let free = is_unobstructed(&builtin_tree(TreeKind::HP, &w).unwrap()).unwrap().unobstructed;
        for c in [0.1, 1.0, 10.0] {
            match solve_moduli(w, c) {
                Ok(sol) => {
                    assert!(free);
                    assert!(sol.x.iter().all(|&x| x > 0.0));
                    assert!(sol.margins.iter().all(|&m| m > 0.0), "{w:?} {c}");
                    assert_eq!(sol.margins, inequality_margins(w, sol.x, c));
                }
                Err(e) => {
                    assert!(!free, "{w:?}: {e}");
                    assert!(matches!(e, Error::Domain(_)));
                }
            }
        }
    }
}

#[test]
fn scaling_the_constant() {
    let base = solve_moduli([1, 2, 2, 1], 1.0).unwrap();
    for k in [2.0, 10.0, 100.0] {
        // the homogeneous part only helps, so scaling x by k covers C = k
        let x = base.x.map(|v| v * k);
        assert!(inequality_margins([1, 2, 2, 1], x, k).iter().all(|&m| m > 0.0));
        let sol = solve_moduli([1, 2, 2, 1], k).unwrap();
        assert!(sol.margins.iter().all(|&m| m > 0.0));
    }
}

#[test]
fn levels_round_trip() {
    for w in [[1, 2, 2, 1], [2, 2, 2, 2], [1, 3, 2, 5]] {
        let sol = solve_moduli(w, 1.0).unwrap();
        for margin in [1.01, 1.1, 3.0] {
            let lv = levels_from_moduli(&sol, margin).unwrap();
            assert!(lv.beta0 > lv.beta3_plus && lv.beta3_plus > lv.beta3_minus);
            assert!((annulus_modulus(1.0, lv.beta0) - sol.x[0]).abs() < 1e-14 * sol.x[0].max(1.0));
            assert!((annulus_modulus(lv.beta0, lv.beta3_plus) - margin).abs() < 1e-14);
            assert!(annulus_modulus(lv.beta0, lv.beta3_plus) > 1.0);
            assert!((annulus_modulus(lv.beta3_plus, lv.beta3_minus) - sol.x[3]).abs() < 1e-13 * sol.x[3].max(1.0));
        }
    }
}

#[test]
fn annulus_bounds() {
    for n in 1..=10 {
        for m in 1..=10 {
            let b = annulus_disk_bound(n, m).unwrap();
            assert!(b.bound <= 1.0);
            // 2|λ|^{n/(n+n′)} = 4e^{−π}
            let lhs = 2.0 * b.lambda_modulus.powf(f64::from(n) / f64::from(n + m));
            assert!((lhs - 4.0 * (-std::f64::consts::PI).exp()).abs() < 1e-14);
        }
    }
    for n in 1..=4 {
        for m in 1..=4 {
            let rep = mcmullen_annulus_check(n, m).unwrap();
            assert!(rep.passes(), "{rep:?}");
            assert!(rep.critical_constant <= 2.0 + 1e-12);
        }
    }
    assert!(annulus_disk_bound(0, 1).is_err());
}

#[test]
fn separating_bound_asymptotics() {
    for c in [0.5, 1.0, 2.0] {
        for eps in [1e-4, 1e-6, 1e-8] {
            let r = separating_circle_bound(eps, c).unwrap() / (0.5 * c * eps.sqrt());
            assert!((0.99..=1.01).contains(&r), "{c} {eps}: {r}");
        }
        let near_edge = separating_circle_bound(0.999_999 / c, c).unwrap();
        assert!(near_edge > separating_circle_bound(0.5 / c, c).unwrap());
        assert!(matches!(separating_circle_bound(1.0 / c, c), Err(Error::Domain(_))));
    }
}

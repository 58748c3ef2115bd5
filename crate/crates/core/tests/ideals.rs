use singlocus::ideals::{
    base_locus_ideal, constituent_ideals, corrected_base_locus_ideal, generic_surface_equation,
    intersect_bruteforce, intersect_cm, membership, mixed_case, IdealError, LocalIdeal, MixedCase,
    ScenarioIdealParams,
};
use singlocus::parse::parse_series;
use singlocus::Series;

const D: u32 = 8;
const ORDER: u32 = 16;

fn s(t: &str) -> Series {
    parse_series(t, ORDER).unwrap()
}

/// Every two-curve configuration with parameters up to 4.
fn two_curve_grid() -> Vec<ScenarioIdealParams> {
    let mut out = Vec::new();
    for m in 1..=4 {
        for n in 1..=4 {
            if m <= n {
                out.push(ScenarioIdealParams::NoTangency { m, n });
            }
            for q in 2..=4 {
                out.push(ScenarioIdealParams::MixedTangency { m, n, q });
            }
        }
    }
    out
}

/// The `(a, b, c, d)` of the lemma for a two-curve configuration. For
/// `m <= q` the roles of `a` and `b` are exchanged: with `a = x` and
/// `d = x^n`, `d` is a zero divisor modulo `a`.
fn lemma_inputs(p: &ScenarioIdealParams) -> [Series; 4] {
    match *p {
        ScenarioIdealParams::NoTangency { m, n } => {
            [s("x"), s(&format!("z^{m}")), s("y"), s(&format!("z^{n}"))]
        }
        ScenarioIdealParams::MixedTangency { m, n, q } => match mixed_case(m, n, q) {
            MixedCase::A => [s(&format!("z^{m}")), s("x"), s("y"), s(&format!("x^{n}"))],
            MixedCase::B => [
                s(&format!("x - z^{q}")),
                s(&format!("z^{m}")),
                s("y"),
                s(&format!("x^{n}")),
            ],
            MixedCase::C => [
                s(&format!("x - z^{q}")),
                s(&format!("z^{m}")),
                s("y"),
                s(&format!("x^{n}*z^{}", m - q * n)),
            ],
        },
        _ => unreachable!(),
    }
}

fn pair(a: &Series, b: &Series) -> LocalIdeal {
    LocalIdeal::new(vec![a.clone(), b.clone()]).unwrap()
}

#[test]
fn lemma_matches_bruteforce_on_grid() {
    let grid = two_curve_grid();
    assert!(grid.len() > 50);
    for p in &grid {
        let [a, b, c, d] = lemma_inputs(p);
        let lemma = intersect_cm(&a, &b, &c, &d, D).unwrap_or_else(|e| panic!("{p:?}: {e}"));
        let brute = intersect_bruteforce(&pair(&a, &b), &pair(&c, &d), D);
        assert!(lemma.span(D).equal_up_to(&brute, D), "{p:?}");
    }
}

#[test]
fn literal_case_a_application_fails_the_hypothesis() {
    // a = x, c = y, d = x^n: d vanishes modulo a.
    let err = intersect_cm(&s("x"), &s("z^2"), &s("y"), &s("x^3"), D).unwrap_err();
    assert!(matches!(err, IdealError::HypothesisViolated(_)));
}

#[test]
fn base_ideals_are_the_intersections() {
    for p in two_curve_grid() {
        let (i1, i2) = constituent_ideals(&p, ORDER).unwrap();
        let brute = intersect_bruteforce(&i1, &i2, D);
        let full = corrected_base_locus_ideal(&p, ORDER).unwrap();
        assert!(full.span(D).equal_up_to(&brute, D), "{p:?}");
        let listed = base_locus_ideal(&p, ORDER)
            .unwrap()
            .span(D)
            .equal_up_to(&brute, D);
        let short = matches!(p, ScenarioIdealParams::MixedTangency { m, n, q } if m > q * n);
        assert_eq!(listed, !short, "{p:?}");
    }
    // Beyond the small grid: m = 5 > qn = 4.
    let p = ScenarioIdealParams::MixedTangency { m: 5, n: 2, q: 2 };
    let (i1, i2) = constituent_ideals(&p, ORDER).unwrap();
    let witness = s("x^3 - x^2*z^2");
    assert!(membership(&witness, &i1, D) && membership(&witness, &i2, D));
    assert!(!membership(
        &witness,
        &base_locus_ideal(&p, ORDER).unwrap(),
        D
    ));
    assert!(membership(
        &witness,
        &corrected_base_locus_ideal(&p, ORDER).unwrap(),
        D
    ));
}

#[test]
fn base_ideals_lie_in_constituents() {
    for p in two_curve_grid() {
        let (i1, i2) = constituent_ideals(&p, ORDER).unwrap();
        for g in base_locus_ideal(&p, ORDER).unwrap().gens() {
            assert!(membership(g, &i1, D) && membership(g, &i2, D), "{p:?}");
        }
    }
}

#[test]
fn counterexample_is_rejected() {
    let err = intersect_cm(&s("x"), &s("y"), &s("x"), &s("y"), D).unwrap_err();
    assert!(matches!(err, IdealError::HypothesisViolated(_)));
    // Missing d in (a, b) is reported separately.
    let err = intersect_cm(&s("x"), &s("z^3"), &s("y"), &s("z^2"), D).unwrap_err();
    assert!(matches!(err, IdealError::HypothesisViolated(m) if m.contains("not in")));
}

#[test]
fn generic_equations_lie_in_their_ideals() {
    let mut families = two_curve_grid();
    for m in 3..=5 {
        for q in 1..=3 {
            families.push(ScenarioIdealParams::Spine { m, q });
            if m >= 4 {
                families.push(ScenarioIdealParams::ThickSpineA { m, q, w: 1 });
                families.push(ScenarioIdealParams::ThickSpineB {
                    m,
                    q,
                    w: 1,
                    f_zero: false,
                });
                families.push(ScenarioIdealParams::ThickSpineB {
                    m,
                    q,
                    w: 0,
                    f_zero: true,
                });
            }
        }
    }
    for p in families {
        let ideal = base_locus_ideal(&p, ORDER).unwrap();
        for seed in 0..3 {
            let f = generic_surface_equation(&ideal, seed);
            assert!(membership(&f, &ideal, D), "{p:?} seed {seed}");
        }
    }
}

#[test]
fn spine_ideal_shape() {
    let i = base_locus_ideal(&ScenarioIdealParams::Spine { m: 4, q: 2 }, ORDER).unwrap();
    assert_eq!(i.to_string(), "(x^2, x*y, x*z^2 - y^3)");
    let i = base_locus_ideal(
        &ScenarioIdealParams::MixedTangency { m: 4, n: 2, q: 2 },
        ORDER,
    )
    .unwrap();
    assert_eq!(i.gens()[2], s("x^2"));
    assert!(LocalIdeal::parse("(x, y", ORDER).is_err());
}

use proptest::prelude::*;

use timeop_core::classical::{
    bracket_qp, bracket_ts, bracket_w, Axis, DerivativeBackend, Grid, PhaseField,
};

type Bracket = fn(&PhaseField<f64>, &PhaseField<f64>) -> timeop_core::Result<PhaseField<f64>>;

const BRACKETS: [(&str, Bracket); 3] = [
    ("qp", bracket_qp),
    ("ts", bracket_ts),
    ("w", bracket_w),
];

fn grid(n: usize) -> Grid<f64> {
    Grid::new(
        Axis::closed(-1.0, 1.0, n).unwrap(),
        Axis::closed(-1.0, 1.0, n).unwrap(),
        Axis::closed(0.0, 1.0, n).unwrap(),
        Axis::closed(-1.0, 1.0, n).unwrap(),
    )
}

/// Smooth field from eight random coefficients.
fn field(g: Grid<f64>, c: &[f64]) -> PhaseField<f64> {
    PhaseField::from_fn(g, DerivativeBackend::CentralDifference, |q, p, t, s| {
        c[0] + c[1] * q * p
            + c[2] * (q + c[3] * t).sin()
            + c[4] * (p * s).cos()
            + c[5] * s * t
            + c[6] * (-(q * q + p * p)).exp()
            + c[7] * q * s * s
    })
}

fn coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, 8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn brackets_are_antisymmetric(a in coeffs(), b in coeffs()) {
        let g = grid(7);
        let (fa, fb) = (field(g, &a), field(g, &b));
        for (name, br) in BRACKETS {
            let ab = br(&fa, &fb).unwrap();
            let ba = br(&fb, &fa).unwrap();
            let scale = ab.interior_max_abs().max(1.0);
            let sum = ab.try_add(&ba).unwrap();
            prop_assert!(sum.interior_max_abs() <= 1e-10 * scale, "{name}");
        }
    }

    #[test]
    fn brackets_are_bilinear(a in coeffs(), b in coeffs(), c in coeffs(), x in -3.0f64..3.0) {
        let g = grid(7);
        let (fa, fb, fc) = (field(g, &a), field(g, &b), field(g, &c));
        let combo = fa.scale(x).try_add(&fb).unwrap();
        for (name, br) in BRACKETS {
            let lhs = br(&combo, &fc).unwrap();
            let rhs = br(&fa, &fc).unwrap().scale(x).try_add(&br(&fb, &fc).unwrap()).unwrap();
            let scale = lhs.interior_max_abs().max(1.0);
            prop_assert!(lhs.try_sub(&rhs).unwrap().interior_max_abs() <= 1e-10 * scale, "{name}");
            let lhs = br(&fc, &combo).unwrap();
            let rhs = br(&fc, &fa).unwrap().scale(x).try_add(&br(&fc, &fb).unwrap()).unwrap();
            prop_assert!(lhs.try_sub(&rhs).unwrap().interior_max_abs() <= 1e-10 * scale, "{name}");
        }
    }
}

fn leibniz_defect(n: usize) -> f64 {
    let g = Grid::new(
        Axis::closed(-1.0, 1.0, n).unwrap(),
        Axis::closed(-1.0, 1.0, n).unwrap(),
        Axis::closed(0.0, 1.0, 5).unwrap(),
        Axis::closed(-1.0, 1.0, 5).unwrap(),
    );
    let a = field(g, &[0.3, 1.0, 0.5, -0.7, 1.2, 0.4, -1.0, 0.8]);
    let b = field(g, &[-0.2, 0.6, -1.1, 0.3, 0.9, -0.5, 0.7, -0.4]);
    let c = field(g, &[1.0, -0.8, 0.4, 1.3, -0.6, 1.1, 0.2, 0.5]);
    let lhs = bracket_qp(&a.try_mul(&b).unwrap(), &c).unwrap();
    let rhs = a
        .try_mul(&bracket_qp(&b, &c).unwrap())
        .unwrap()
        .try_add(&b.try_mul(&bracket_qp(&a, &c).unwrap()).unwrap())
        .unwrap();
    lhs.try_sub(&rhs).unwrap().interior_max_abs()
}

#[test]
fn leibniz_rule_holds_at_second_order() {
    let coarse = leibniz_defect(41);
    let fine = leibniz_defect(81);
    let order = (coarse / fine).log2();
    assert!((1.8..=2.2).contains(&order), "defects {coarse} {fine} order {order}");
}

use std::collections::HashMap;

use jetspace_core::algebra::{
    matrix_rank, transcendence_degree, BaseField, FieldElement, FunctionField, PolyRing,
    RingElement,
};
use jetspace_core::analysis::{jacobian_order, Options};
use jetspace_core::arc::make_arc;
use jetspace_core::expr::{parse_field_element, parse_polynomial, parse_series};
use jetspace_core::geometry::{MorphismPresentation, VarietyPresentation};
use jetspace_core::invariants::{fitting_minor_oracle, profile_of_omega, smith_orders, Level};
use jetspace_core::jets::jet_ideal;
use jetspace_core::series::{OrderValue, SeriesExpression, TruncatedSeries};
use proptest::prelude::*;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

/// `c * x^a * y^b + ...` with small coefficients.
fn poly_src(
    vars: &'static [&'static str],
    max_exp: u32,
    max_terms: usize,
) -> impl Strategy<Value = String> {
    prop::collection::vec(
        (-3i64..=3, prop::collection::vec(0..=max_exp, vars.len())),
        1..=max_terms,
    )
    .prop_map(move |terms| {
        terms
            .iter()
            .map(|(c, es)| {
                let mut s = format!("({c})");
                for (v, e) in vars.iter().zip(es) {
                    s.push_str(&format!("*{v}^{e}"));
                }
                s
            })
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

fn uv() -> FunctionField {
    FunctionField::new(BaseField::Rationals, ["u", "v"])
}

fn fe(src: &str, k: &FunctionField) -> FieldElement {
    parse_field_element(src, k).unwrap()
}

fn ratfun() -> impl Strategy<Value = String> {
    (poly_src(&["u", "v"], 2, 3), poly_src(&["u", "v"], 2, 2))
        .prop_map(|(n, d)| format!("({n})/({d} + 7)"))
}

fn nonzero_ratfun() -> impl Strategy<Value = String> {
    ratfun().prop_filter("nonzero", |s| !fe(s, &uv()).is_zero())
}

fn q_series(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 1..=max_len)
}

fn series(coeffs: &[i64], p: usize) -> TruncatedSeries {
    let k = FunctionField::constants(BaseField::Rationals);
    let mut c: Vec<FieldElement> = coeffs.iter().map(|&x| k.from_int(x)).collect();
    c.resize(p, k.zero());
    c.truncate(p);
    TruncatedSeries::new(c)
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn field_equality_is_consistent_with_arithmetic(a in ratfun(), b in ratfun(), c in nonzero_ratfun()) {
        let k = uv();
        let (a, b, c) = (fe(&a, &k), fe(&b, &k), fe(&c, &k));
        prop_assert_eq!(a.plus(&b).minus(&b), a.clone());
        prop_assert_eq!(a.times(&c).div(&c).unwrap(), a.clone());
        prop_assert_eq!(a.times(&b.plus(&c)), a.times(&b).plus(&a.times(&c)));
        prop_assert_eq!(a.plus(&b), b.plus(&a));
        // equal values stay equal after the same operation
        let a2 = a.times(&c).div(&c).unwrap();
        prop_assert_eq!(a2.plus(&b), a.plus(&b));
    }

    #[test]
    fn rank_of_transpose(entries in prop::collection::vec(poly_src(&["u"], 2, 2), 1..=16), cols in 1usize..=4, dup in any::<bool>()) {
        let k = uv();
        let rows_n = entries.len().div_ceil(cols);
        let mut m: Vec<Vec<FieldElement>> = (0..rows_n)
            .map(|r| (0..cols).map(|c| entries.get(r * cols + c).map_or(k.zero(), |s| fe(s, &k))).collect())
            .collect();
        if dup && rows_n > 1 {
            let u = k.transcendental(0);
            m[rows_n - 1] = m[0].iter().map(|x| x.times(&u)).collect();
        }
        let t: Vec<Vec<FieldElement>> = (0..cols).map(|c| m.iter().map(|r| r[c].clone()).collect()).collect();
        prop_assert_eq!(matrix_rank(&m), matrix_rank(&t));
    }

    #[test]
    fn transcendence_degree_invariance(srcs in prop::collection::vec(ratfun(), 1..=4), perm_seed in any::<u64>(), i in 0usize..4, j in 0usize..4) {
        let k = uv();
        let xs: Vec<FieldElement> = srcs.iter().map(|s| fe(s, &k)).collect();
        let d = transcendence_degree(&xs).value;
        let mut p = xs.clone();
        let n = p.len();
        p.rotate_left((perm_seed as usize) % n);
        p.swap(i % n, j % n);
        prop_assert_eq!(transcendence_degree(&p).value, d);
        let mut q = xs.clone();
        q.push(xs[i % n].times(&xs[j % n]).plus(&xs[j % n]));
        prop_assert_eq!(transcendence_degree(&q).value, d);
    }

    #[test]
    fn order_of_product_is_saturating_sum(a in q_series(8), b in q_series(8), shift_a in 0usize..6, shift_b in 0usize..6, p in 1usize..14) {
        let a = series(&a, p).shift_up(shift_a);
        let b = series(&b, p).shift_up(shift_b);
        let prod = a.times(&b);
        let expected = (a.order() + b.order()).clamp(p as u64);
        prop_assert_eq!(prod.order().clamp(p as u64), expected);
    }

    #[test]
    fn expansion_prefixes_agree(num in q_series(5), den in q_series(4), c0 in 1i64..=5, p in 1usize..10, extra in 0usize..10) {
        let k = FunctionField::constants(BaseField::Rationals);
        let mut den = den;
        den[0] = c0;
        let e = SeriesExpression::new(
            &k,
            num.iter().map(|&x| k.from_int(x)).collect(),
            den.iter().map(|&x| k.from_int(x)).collect(),
        ).unwrap();
        let short = e.expand(p).unwrap();
        let long = e.expand(p + extra).unwrap();
        prop_assert_eq!(long.truncated(p), short);
    }

    #[test]
    fn double_inverse(mut a in q_series(8), c0 in prop_oneof![-5i64..=-1, 1i64..=5], p in 1usize..12) {
        a[0] = c0;
        let s = series(&a, p);
        let back = s.invert().unwrap().invert().unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn leibniz_rule_in_the_jet_ideal(f in poly_src(&["x", "y"], 2, 3), g in poly_src(&["x", "y"], 2, 3), n in 0usize..4) {
        let ring = PolyRing::new(BaseField::Rationals, ["x", "y"]);
        let (f, g) = (parse_polynomial(&f, &ring).unwrap(), parse_polynomial(&g, &ring).unwrap());
        let fg = &f * &g;
        let x = VarietyPresentation::new(ring, vec![f, g, fg], None).unwrap();
        let ideal = jet_ideal(&x, n);
        let jets = &ideal.generators;
        for p in 0..=n {
            let mut sum = jets[0][p].zero_like();
            for i in 0..=p {
                sum = sum.plus(&jets[0][i].times(&jets[1][p - i]));
            }
            prop_assert_eq!(&jets[2][p], &sum);
        }
        // F_{j,p} does not depend on the level
        let higher = jet_ideal(&x, n + 2);
        for j in 0..3 {
            for p in 0..=n {
                let name = |id: &jetspace_core::jets::JetIdeal, q: usize| id.generators[j][q].to_string();
                prop_assert_eq!(name(&ideal, p), name(&higher, p));
            }
        }
    }

    #[test]
    fn arc_coefficients_lie_on_the_jet_scheme(w in q_series(4), v in q_series(4), n in 0usize..5) {
        // the Whitney umbrella x y^2 = z^2 contains (w^2, v, w v)
        let ring = PolyRing::new(BaseField::Rationals, ["x", "y", "z"]);
        let x = VarietyPresentation::new(ring.clone(), vec![parse_polynomial("x*y^2 - z^2", &ring).unwrap()], Some(2)).unwrap();
        let k = FunctionField::constants(BaseField::Rationals);
        let poly = |c: &[i64]| c.iter().enumerate().map(|(i, a)| format!("({a})*t^{i}")).collect::<Vec<_>>().join(" + ");
        let (ws, vs) = (poly(&w), poly(&v));
        let comps = [format!("({ws})^2"), vs.clone(), format!("({ws})*({vs})")]
            .iter()
            .map(|s| parse_series(s, &k, &HashMap::new()).unwrap())
            .collect();
        let arc = make_arc(&x, comps, 12).unwrap();
        let point = arc.truncate(n).unwrap().coordinates;
        let one = k.one();
        for (_, _, g) in jet_ideal(&x, n).flat() {
            prop_assert!(g.evaluate(&point, &one).is_zero());
        }
        // Betti numbers of the truncations never increase
        let d: Vec<usize> = (0..=8).map(|m| profile_of_omega(&arc, Level::Finite(m)).unwrap().betti).collect();
        prop_assert!(d.windows(2).all(|p| p[0] >= p[1]), "{:?}", d);
    }
}

fn random_matrix() -> impl Strategy<Value = (usize, usize, usize, Vec<Vec<i64>>)> {
    (1usize..=4, 1usize..=4, 6usize..=16).prop_flat_map(|(r, c, p)| {
        (
            Just(r),
            Just(c),
            Just(p),
            prop::collection::vec(
                (0usize..4, q_series(4)).prop_map(|(shift, mut cs)| {
                    let mut v = vec![0; shift];
                    v.append(&mut cs);
                    v
                }),
                r * c,
            ),
        )
    })
}

fn to_matrix(r: usize, c: usize, p: usize, entries: &[Vec<i64>]) -> Vec<Vec<TruncatedSeries>> {
    (0..r)
        .map(|i| (0..c).map(|j| series(&entries[i * c + j], p)).collect())
        .collect()
}

proptest! {
    #![proptest_config(cfg(96))]

    #[test]
    fn smith_matches_minors((r, c, p, entries) in random_matrix()) {
        let m = to_matrix(r, c, p, &entries);
        let profile = smith_orders(&m, c, Level::Infinite).unwrap();
        for i in 0..=c {
            prop_assert_eq!(
                profile.fitting_invariant(i).clamp(p as u64),
                fitting_minor_oracle(&m, c, i).unwrap().clamp(p as u64),
                "c_{}", i
            );
        }
        // finite levels agree with the minors of the reduced matrix
        let n = p / 2;
        let finite = smith_orders(&m, c, Level::Finite(n)).unwrap();
        let cut: Vec<Vec<TruncatedSeries>> = m.iter().map(|row| row.iter().map(|s| s.truncated(n + 1)).collect()).collect();
        for i in 0..=c {
            prop_assert_eq!(
                finite.fitting_invariant(i).bound().min(n as u64 + 1),
                fitting_minor_oracle(&cut, c, i).unwrap().bound().min(n as u64 + 1)
            );
        }
    }

    #[test]
    fn unimodular_changes_keep_the_profile((r, c, p, entries) in random_matrix(), ops in prop::collection::vec((0usize..4, 0usize..4, q_series(3), any::<bool>()), 1..6)) {
        let m = to_matrix(r, c, p, &entries);
        let mut changed = m.clone();
        for (a, b, mult, on_rows) in ops {
            let f = series(&mult, p);
            if on_rows && r > 1 {
                let (a, b) = (a % r, b % r);
                if a != b {
                    let row: Vec<TruncatedSeries> = changed[b].iter().map(|s| s.times(&f)).collect();
                    for (x, y) in changed[a].iter_mut().zip(row) {
                        *x = x.plus(&y);
                    }
                }
            } else if c > 1 {
                let (a, b) = (a % c, b % c);
                if a != b {
                    for row in changed.iter_mut() {
                        let add = row[b].times(&f);
                        row[a] = row[a].plus(&add);
                    }
                }
            }
        }
        let before = smith_orders(&m, c, Level::Infinite).unwrap();
        let after = smith_orders(&changed, c, Level::Infinite).unwrap();
        for i in 0..=c {
            prop_assert_eq!(
                before.fitting_invariant(i).clamp(p as u64),
                after.fitting_invariant(i).clamp(p as u64)
            );
        }
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn jacobian_orders_compose(
        f in prop::collection::vec(poly_src(&["a", "b"], 2, 3), 2),
        g in prop::collection::vec(poly_src(&["x", "y"], 2, 3), 2),
        b0 in q_series(4),
        b1 in q_series(4),
    ) {
        let base = BaseField::Rationals;
        let ra = PolyRing::new(base, ["a", "b"]);
        let rx = PolyRing::new(base, ["x", "y"]);
        let rz = PolyRing::new(base, ["z", "w"]);
        let ya = VarietyPresentation::new(ra.clone(), vec![], Some(2)).unwrap();
        let yx = VarietyPresentation::new(rx.clone(), vec![], Some(2)).unwrap();
        let yz = VarietyPresentation::new(rz, vec![], Some(2)).unwrap();
        let fp: Vec<_> = f.iter().map(|s| parse_polynomial(s, &ra).unwrap()).collect();
        let gp: Vec<_> = g.iter().map(|s| parse_polynomial(s, &rx).unwrap()).collect();
        let gf: Vec<_> = gp.iter().map(|h| h.compose(&fp, &ra)).collect();
        let fm = MorphismPresentation::new(ya.clone(), yx.clone(), fp).unwrap();
        let gm = MorphismPresentation::new(yx, yz.clone(), gp).unwrap();
        let gfm = MorphismPresentation::new(ya.clone(), yz, gf).unwrap();

        let k = FunctionField::constants(base);
        let poly = |c: &[i64]| c.iter().enumerate().map(|(i, a)| format!("({a})*t^{i}")).collect::<Vec<_>>().join(" + ");
        let comps = [poly(&b0), poly(&b1)].iter().map(|s| parse_series(s, &k, &HashMap::new()).unwrap()).collect();
        let beta = make_arc(&ya, comps, 24).unwrap();
        let opts = Options { precision_cap: 48 };
        let ord = |m: &MorphismPresentation, arc| jacobian_order(m, arc, &opts).unwrap().profile.fitting_invariant(0);
        let of = ord(&fm, &beta);
        let alpha = jetspace_core::arc::compose(&fm, &beta).unwrap();
        let og = ord(&gm, &alpha);
        let ogf = ord(&gfm, &beta);
        prop_assume!(of.is_finite() && og.is_finite());
        prop_assert_eq!(ogf, of + og);
    }
}

#[test]
fn saturating_sum_examples() {
    assert_eq!(
        OrderValue::Finite(2) + OrderValue::Finite(3),
        OrderValue::Finite(5)
    );
    assert!(!(OrderValue::Finite(2) + OrderValue::AtLeast(8)).is_finite());
}

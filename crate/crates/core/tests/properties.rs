mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::sample::Index;
use reeb_forge::catalog::{make_bouquet, product, ManifoldDesc};
use reeb_forge::engine::{euler_delta, run_script, BubblingOp, BubblingScript, ReebProfile};
use reeb_forge::oracle::{build_model, oracle_homology, SpaceSpec};
use reeb_forge::pid_algebra::{
    change_coefficients, cohomology_uct, kunneth, smith_normal_form, IntMatrix,
};
use reeb_forge::planner::{
    check_torsion_gap, plan_finite_torsion_products, plan_free_realization,
    plan_torsion_free_wedge, verify_necessary_conditions, Direction, TargetSpec,
};
use reeb_forge::{FGModule, GradedModule, Matrix, Ring, SmallMatrix};

use common::{generator_pool, ScriptShape};

fn matrix_entries() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (0usize..=6, 0usize..=6)
        .prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-20i64..=20, r * c)))
}

/// Fraction-free (Bareiss) determinant.
fn determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `d_k` = gcd of all `k x k` minors.
fn determinantal_divisor(m: &[Vec<i64>], k: usize) -> BigInt {
    let (rows, cols) = (m.len(), m.first().map_or(0, Vec::len));
    let mut g = BigInt::zero();
    for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
            let minor = rs
                .iter()
                .map(|&r| cs.iter().map(|&c| BigInt::from(m[r][c])).collect())
                .collect();
            g = g.gcd(&determinant(minor));
        }
    }
    g
}

fn small_module() -> impl Strategy<Value = FGModule> {
    (0usize..3, prop::collection::vec(2u64..30, 0..4)).prop_map(|(r, t)| {
        FGModule::normalize(
            Ring::Integers,
            r as i64,
            &t.iter().map(|&d| d as i64).collect::<Vec<_>>(),
        )
        .unwrap()
    })
}

fn small_graded() -> impl Strategy<Value = GradedModule> {
    prop::collection::vec(small_module(), 1..5).prop_map(|mut d| {
        d[0] = FGModule::free(Ring::Integers, 1);
        GradedModule::new(Ring::Integers, d).unwrap()
    })
}

fn space() -> impl Strategy<Value = SpaceSpec> {
    let leaf = prop_oneof![
        Just(SpaceSpec::Point),
        (1usize..=4).prop_map(SpaceSpec::Sphere),
        (0usize..=3).prop_map(SpaceSpec::Surface),
        (2u64..=6, 1u64..6).prop_filter_map("coprime", |(p, q)| {
            (q < p && p.gcd(&q) == 1).then_some(SpaceSpec::Lens(p, q))
        }),
    ];
    prop_oneof![
        leaf.clone(),
        prop::collection::vec(leaf.clone(), 2..=3).prop_map(SpaceSpec::Wedge),
        (leaf.clone(), leaf).prop_map(|(a, b)| SpaceSpec::Product(vec![a, b])),
    ]
}

/// Formula-side homology of an oracle spec.
fn formula_homology(s: &SpaceSpec) -> GradedModule {
    match s {
        SpaceSpec::Point => GradedModule::point(Ring::Integers),
        SpaceSpec::Sphere(k) => ManifoldDesc::sphere(*k).unwrap().homology().clone(),
        SpaceSpec::Surface(g) => ManifoldDesc::surface(*g).homology().clone(),
        SpaceSpec::Lens(p, q) => ManifoldDesc::lens(*p, *q).unwrap().homology().clone(),
        SpaceSpec::Wedge(parts) => parts
            .iter()
            .fold(GradedModule::point(Ring::Integers), |acc, p| {
                acc.direct_sum(&formula_homology(p).reduced()).unwrap()
            }),
        SpaceSpec::Product(parts) => parts
            .iter()
            .fold(GradedModule::point(Ring::Integers), |acc, p| {
                kunneth(&acc, &formula_homology(p)).unwrap()
            }),
    }
}

fn script(n: usize, shape: ScriptShape) -> impl Strategy<Value = BubblingScript> {
    let pool = generator_pool(n, shape);
    let op = (
        any::<Index>(),
        prop::collection::vec(any::<Index>(), 1..=3),
        any::<bool>(),
    )
        .prop_map(move |(i, js, wedge)| {
            if wedge && shape.allow_wedge {
                let parts: Vec<_> = js.iter().map(|j| j.get(&pool).clone()).collect();
                BubblingOp::wedge(make_bouquet(&parts).unwrap())
            } else {
                BubblingOp::normal(i.get(&pool).clone())
            }
        });
    prop::collection::vec(op, 0..=6).prop_map(move |ops| BubblingScript { ambient: n, ops })
}

fn any_script(shape: ScriptShape) -> impl Strategy<Value = BubblingScript> {
    (1usize..=8).prop_flat_map(move |n| script(n, shape))
}

fn free_target() -> impl Strategy<Value = Vec<usize>> {
    (1usize..=7).prop_flat_map(|n| {
        (prop::collection::vec(0usize..=3, n - 1), 1usize..=5).prop_map(|(mid, top)| {
            let mut r = vec![1];
            r.extend(mid);
            r.push(top);
            r
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_matches_determinantal_divisors((r, c, e) in matrix_entries()) {
        let m = Matrix::from_i64(r, c, &e).unwrap();
        let snf = smith_normal_form(&m);
        let rows: Vec<Vec<i64>> = (0..r).map(|i| e[i * c..(i + 1) * c].to_vec()).collect();
        let mut prefix = BigInt::from(1);
        for k in 1..=r.min(c) {
            let d = determinantal_divisor(&rows, k);
            if k <= snf.len() {
                prefix *= &snf[k - 1];
                prop_assert_eq!(&prefix, &d, "k = {}", k);
            } else {
                prop_assert!(d.is_zero());
            }
        }
        for w in snf.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert!(snf.iter().all(|x| x.is_positive()));
    }

    #[test]
    fn snf_scalar_types_agree((r, c, e) in matrix_entries()) {
        let big: Vec<BigInt> = smith_normal_form(&Matrix::from_i64(r, c, &e).unwrap());
        let small: Vec<i64> = smith_normal_form(&SmallMatrix::from_i64(r, c, &e).unwrap());
        prop_assert_eq!(big, small.into_iter().map(BigInt::from).collect::<Vec<_>>());
    }

    #[test]
    fn normalization_is_canonical(rank in 0i64..4, mut divisors in prop::collection::vec(2i64..60, 0..6)) {
        let m = FGModule::normalize(Ring::Integers, rank, &divisors).unwrap();
        for w in m.torsion().windows(2) {
            prop_assert_eq!(w[1] % w[0], 0);
        }
        prop_assert!(m.torsion().iter().all(|&d| d >= 2));
        let order: u64 = divisors.iter().map(|&d| d as u64).product();
        prop_assert_eq!(m.torsion_order(), Some(order));
        divisors.reverse();
        prop_assert_eq!(&FGModule::normalize(Ring::Integers, rank, &divisors).unwrap(), &m);
        let again: Vec<i64> = m.torsion().iter().map(|&d| d as i64).collect();
        prop_assert_eq!(&FGModule::normalize(Ring::Integers, rank, &again).unwrap(), &m);
    }

    #[test]
    fn direct_sum_laws(a in small_module(), b in small_module(), c in small_module()) {
        prop_assert_eq!(a.direct_sum(&b).unwrap(), b.direct_sum(&a).unwrap());
        prop_assert_eq!(
            a.direct_sum(&b).unwrap().direct_sum(&c).unwrap(),
            a.direct_sum(&b.direct_sum(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.direct_sum(&FGModule::zero(Ring::Integers)).unwrap(), a.clone());
    }

    #[test]
    fn tensor_and_tor_laws(a in small_module(), b in small_module()) {
        let z = FGModule::free(Ring::Integers, 1);
        prop_assert_eq!(a.tensor_product(&z).unwrap(), a.clone());
        prop_assert_eq!(a.tensor_product(&b).unwrap(), b.tensor_product(&a).unwrap());
        prop_assert_eq!(a.torsion_product(&b).unwrap(), b.torsion_product(&a).unwrap());
        prop_assert!(a.torsion_product(&z).unwrap().is_zero());
        prop_assert_eq!(a.tensor_product(&b).unwrap().rank(), a.rank() * b.rank());
    }

    #[test]
    fn module_text_round_trip(a in small_module()) {
        let back: FGModule = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn kunneth_multiplies_euler_characteristic(x in small_graded(), y in small_graded()) {
        let p = kunneth(&x, &y).unwrap();
        prop_assert_eq!(p.euler_characteristic(), x.euler_characteristic() * y.euler_characteristic());
        prop_assert_eq!(p.get(0), FGModule::free(Ring::Integers, 1));
    }

    #[test]
    fn field_coefficients_keep_euler_characteristic(x in small_graded(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        for ring in [Ring::Rationals, Ring::prime_field(p).unwrap()] {
            let y = change_coefficients(&x, ring).unwrap();
            prop_assert_eq!(y.euler_characteristic(), x.euler_characteristic());
            prop_assert!(y.is_torsion_free());
        }
    }

    #[test]
    fn cohomology_shifts_torsion_up(x in small_graded()) {
        let c = cohomology_uct(&x).unwrap();
        prop_assert_eq!(c.euler_characteristic(), x.euler_characteristic());
        for i in 0..=c.top() as i64 {
            prop_assert_eq!(c.rank(i), x.rank(i));
            let (ci, xi) = (c.get(i), x.get(i - 1));
            prop_assert_eq!(ci.torsion(), xi.torsion());
        }
    }

    #[test]
    fn oracle_agrees_with_formulas(s in space()) {
        let model = build_model(&s).unwrap();
        let oracle = oracle_homology(&model).unwrap();
        let formula = formula_homology(&s);
        prop_assert!(oracle.is_isomorphic(&formula), "{:?}: {} vs {}", s, oracle, formula);
    }

    #[test]
    fn euler_deltas_add_up(s in any_script(ScriptShape { allow_wedge: true, ..Default::default() })) {
        let p = run_script(&s).unwrap();
        let total: i64 = s.ops.iter().map(|op| euler_delta(s.ambient, op).unwrap()).sum();
        prop_assert_eq!(p.euler_characteristic(), 1 + total);
    }

    #[test]
    fn op_order_does_not_matter(s in any_script(ScriptShape { allow_wedge: true, ..Default::default() })) {
        let mut rev = s.clone();
        rev.ops.reverse();
        let (a, b) = (run_script(&s).unwrap(), run_script(&rev).unwrap());
        prop_assert_eq!(a.homology(), b.homology());
    }

    #[test]
    fn top_rank_counts_ops(s in any_script(ScriptShape { allow_wedge: true, ..Default::default() })) {
        let p = run_script(&s).unwrap();
        prop_assert_eq!(p.homology().get(0), FGModule::free(Ring::Integers, 1));
        prop_assert!(p.homology().get(s.ambient as i64).is_free());
        prop_assert_eq!(p.homology().rank(s.ambient as i64), s.ops.len());
    }

    #[test]
    fn normal_scripts_satisfy_necessary_conditions(s in any_script(ScriptShape::default())) {
        let p = run_script(&s).unwrap();
        let r = verify_necessary_conditions(&p);
        prop_assert!(r.all_passed(), "{}: {:?}", p.homology(), r);
    }

    #[test]
    fn torsion_free_generators_keep_freeness(s in any_script(ScriptShape { allow_wedge: true, torsion_free: true, ..Default::default() })) {
        prop_assert!(run_script(&s).unwrap().homology().is_torsion_free());
    }

    #[test]
    fn json_round_trips(s in any_script(ScriptShape { allow_wedge: true, ..Default::default() })) {
        let json = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(&serde_json::from_str::<BubblingScript>(&json).unwrap(), &s);
        let p = run_script(&s).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<ReebProfile>(&json).unwrap(), p);
    }

    #[test]
    fn free_plans_round_trip(ranks in free_target()) {
        let n = ranks.len() - 1;
        let t = TargetSpec::new(n, ranks.clone()).unwrap();
        let middle: usize = ranks[1..n].iter().sum();
        match plan_free_realization(&t, Ring::Integers) {
            Ok(rep) => {
                prop_assert!(middle <= ranks[n]);
                prop_assert_eq!(run_script(&rep.script).unwrap().homology().ranks(), ranks);
            }
            Err(e) => prop_assert!(e.is_infeasible() && middle > ranks[n]),
        }
    }

    #[test]
    fn wedge_and_normal_plans_differ_only_on_top(ranks in free_target()) {
        let n = ranks.len() - 1;
        let t = TargetSpec::new(n, ranks.clone()).unwrap();
        let wedge = plan_torsion_free_wedge(&t).unwrap();
        prop_assert_eq!(wedge.achieved.ranks(), ranks.clone());
        prop_assert_eq!(wedge.script.ops.len(), ranks[n]);
        // the same spheres, one normal op each
        let mut normal = BubblingScript::new(n);
        for op in &wedge.script.ops {
            for m in op.generating_manifolds().iter().filter(|m| !m.is_point()) {
                normal.push(BubblingOp::normal(m.clone()));
            }
        }
        let spheres = normal.ops.len();
        normal.push(BubblingOp::normal(ManifoldDesc::point()));
        let h = run_script(&normal).unwrap();
        prop_assert_eq!(&h.homology().ranks()[1..n], &ranks[1..n]);
        prop_assert_eq!(h.homology().rank(n as i64), spheres + 1);
    }

    #[test]
    fn torsion_products_have_small_gaps(
        n in 7usize..=9,
        picks in prop::collection::vec((-1i64..=2, 0usize..4), 3),
    ) {
        let groups = [vec![], vec![2u64], vec![3], vec![2, 4]];
        let (gs, gr): (Vec<i64>, Vec<FGModule>) = picks[..n - 6]
            .iter()
            .map(|&(g, i)| {
                let t: &[u64] = if g < 0 { &[] } else { &groups[i] };
                (g, FGModule::integral(0, t).unwrap())
            })
            .unzip();
        let rep = plan_finite_torsion_products(n, &gs, &gr).unwrap();
        prop_assert!(rep.target_met, "{:?}", rep.notes);
        let p = run_script(&rep.script).unwrap();
        let gap = check_torsion_gap(&p, 1, Direction::Below).unwrap();
        prop_assert!(gap.holds && gap.longest_run <= 1);
        prop_assert!(verify_necessary_conditions(&p).all_passed());
    }

    #[test]
    fn products_of_spheres_follow_kunneth(a in 1usize..=3, b in 1usize..=3) {
        let m = product(&ManifoldDesc::sphere(a).unwrap(), &ManifoldDesc::sphere(b).unwrap());
        let mut ranks = vec![0; a + b + 1];
        for i in [0, a, b, a + b] {
            ranks[i] += 1;
        }
        prop_assert_eq!(m.homology().ranks(), ranks);
    }
}

#[test]
fn determinant_oracle_sanity() {
    let m = vec![vec![2, 4], vec![6, 8]];
    assert_eq!(determinantal_divisor(&m, 1), BigInt::from(2));
    assert_eq!(determinantal_divisor(&m, 2), BigInt::from(8));
    let id = IntMatrix::<i64>::identity(3);
    assert_eq!(smith_normal_form(&id), vec![1, 1, 1]);
}

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sugeno_bounds::binops::{BinaryOpSpec, MixedOpSpec};
use sugeno_bounds::instance::InstanceFile;
use sugeno_bounds::integrals::generalized_integral;
use sugeno_bounds::measure::{DiscreteMeasure, Subset};
use sugeno_bounds::profile::Instance;
use sugeno_bounds::symmetric::symmetric_integral;
use sugeno_bounds::transforms::{Domain, Expr, Mono, PiecewiseMap, Segment};
use sugeno_bounds::verify::generate::{random_function, random_measure, random_signed_function, random_subset};
use sugeno_bounds::verify::{oracle_integral, MeasureKind};
use sugeno_bounds::{ExtReal, SignedExtReal};

fn setup(seed: u64, n: usize) -> (DiscreteMeasure, Subset, Vec<ExtReal>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_subset(&mut rng, n);
    let m = random_measure(&mut rng, n, MeasureKind::Mixed, a).unwrap();
    let f = random_function(&mut rng, n, 4.0);
    (m, a, f)
}

fn op(product: bool) -> BinaryOpSpec {
    if product {
        BinaryOpSpec::product()
    } else {
        BinaryOpSpec::min()
    }
}

fn is_monotone(m: &DiscreteMeasure) -> bool {
    let space = m.space();
    space.subsets().all(|s| (0..space.n()).all(|i| m.value(s) <= m.value(s.with(i))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn generated_measures_are_monotone(seed in any::<u64>(), n in 1usize..=6) {
        let (m, _, _) = setup(seed, n);
        prop_assert!(is_monotone(&m));
        prop_assert_eq!(m.value(Subset::EMPTY), ExtReal::ZERO);
    }

    #[test]
    fn engine_matches_oracle(seed in any::<u64>(), n in 1usize..=6, product in any::<bool>()) {
        let (m, a, f) = setup(seed, n);
        let op = op(product);
        prop_assert_eq!(generalized_integral(&op, &m, a, &f).unwrap().value, oracle_integral(&op, &m, a, &f));
    }

    #[test]
    fn integral_is_monotone_in_f(seed in any::<u64>(), n in 1usize..=6, bump in 0.0f64..2.0, product in any::<bool>()) {
        let (m, a, f) = setup(seed, n);
        let g: Vec<ExtReal> = f.iter().map(|v| *v + ExtReal::new(bump)).collect();
        let op = op(product);
        let (lo, hi) = (generalized_integral(&op, &m, a, &f).unwrap().value, generalized_integral(&op, &m, a, &g).unwrap().value);
        prop_assert!(lo <= hi, "{lo:?} > {hi:?}");
    }

    #[test]
    fn sugeno_is_capped_by_max_f_and_measure(seed in any::<u64>(), n in 1usize..=6) {
        let (m, a, f) = setup(seed, n);
        let v = generalized_integral(&BinaryOpSpec::min(), &m, a, &f).unwrap().value;
        let top = a.iter().map(|i| f[i]).fold(ExtReal::ZERO, ExtReal::max);
        prop_assert!(v <= top.min(m.value(a)));
    }

    #[test]
    fn sugeno_of_an_indicator(seed in any::<u64>(), n in 1usize..=6, c in 0.0f64..5.0) {
        let (m, a, _) = setup(seed, n);
        let f: Vec<ExtReal> = (0..n).map(|i| if a.contains(i) { ExtReal::new(c) } else { ExtReal::ZERO }).collect();
        let v = generalized_integral(&BinaryOpSpec::min(), &m, a, &f).unwrap().value;
        let expected = if a.is_empty() { ExtReal::ZERO } else { ExtReal::new(c).min(m.value(a)) };
        prop_assert_eq!(v, expected);
    }

    #[test]
    fn symmetric_integral_is_odd(seed in any::<u64>(), n in 1usize..=6, ovee in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_subset(&mut rng, n);
        let m = random_measure(&mut rng, n, MeasureKind::General, a).unwrap();
        let f = random_signed_function(&mut rng, n, 3.0);
        let neg: Vec<SignedExtReal> = f.iter().map(|v| SignedExtReal::new(-v.to_f64())).collect();
        let star = if ovee { MixedOpSpec::ovee() } else { MixedOpSpec::plus() };
        let pos = Instance::signed(m.clone(), a, f).unwrap();
        let flip = Instance::signed(m, a, neg).unwrap();
        let x = symmetric_integral(&star, &pos, None, 1e-9).unwrap().value.to_f64();
        let y = symmetric_integral(&star, &flip, None, 1e-9).unwrap().value.to_f64();
        prop_assert_eq!(x, -y);
    }

    #[test]
    fn instance_files_round_trip(seed in any::<u64>(), n in 1usize..=6) {
        let (m, a, f) = setup(seed, n);
        let inst = Instance::discrete(m, a, f).unwrap();
        let text = InstanceFile::from_instance(&inst).to_json();
        prop_assert_eq!(InstanceFile::parse(&text).unwrap().to_instance().unwrap(), inst);
    }

    #[test]
    fn quantized_measures_stay_monotone(seed in any::<u64>(), n in 1usize..=6) {
        let (m, _, _) = setup(seed, n);
        prop_assert!(is_monotone(&m.quantize(1.0 / 64.0)));
    }

    #[test]
    fn piecewise_linear_with_falling_slopes_is_concave(
        slopes in prop::collection::vec(-3.0f64..3.0, 1..5),
        widths in prop::collection::vec(0.1f64..2.0, 4),
        v0 in 0.0f64..2.0,
    ) {
        let mut slopes = slopes;
        slopes.sort_by(|x, y| y.total_cmp(x));
        let mut segs = Vec::new();
        let (mut x, mut v) = (0.0, v0);
        for (k, &b) in slopes.iter().enumerate() {
            let hi = if k + 1 == slopes.len() { f64::INFINITY } else { x + widths[k] };
            let mono = if b > 0.0 { Mono::Inc } else if b < 0.0 { Mono::Dec } else { Mono::Const };
            segs.push(Segment::new(x, hi, Expr::Affine { a: v - b * x, b }, mono));
            if hi.is_finite() {
                v += b * (hi - x);
                x = hi;
            }
        }
        let h = PiecewiseMap::new(segs, Domain::Nonneg).unwrap();
        prop_assert!(h.is_concave());
        prop_assert_eq!(h.is_convex(), slopes.windows(2).all(|w| w[0] == w[1]));
    }
}

#[test]
fn infinity_times_zero_is_zero() {
    let inf = ExtReal::INFINITY;
    assert_eq!(BinaryOpSpec::product().apply(inf, ExtReal::ZERO), ExtReal::ZERO);
    assert_eq!(BinaryOpSpec::product().apply(ExtReal::ZERO, inf), ExtReal::ZERO);
}

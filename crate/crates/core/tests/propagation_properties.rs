use proptest::prelude::*;
use txunc_core::measurement::RelativeUncertainty;
use txunc_core::propagation::{combine_relative, propagate, Inputs};
use txunc_core::{Measurement, Model};

const PRODUCT_MODELS: &[&str] = &[
    "Cp * Ny * Sp / (Np * Sy)",
    "a * b",
    "a / b / c",
    "a^2 * b^-1",
    "3 * a * b^3 / (c * d)",
];

fn positive_inputs(model: &Model, values: &[(f64, f64)]) -> Inputs {
    model
        .inputs()
        .iter()
        .zip(values)
        .map(|(n, &(v, r))| (n.clone(), Measurement::with_relative(v, r).unwrap()))
        .collect()
}

fn ulps_apart(a: f64, b: f64) -> u64 {
    (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn product_quotient_models_match_relative_quadrature(
        which in 0..PRODUCT_MODELS.len(),
        values in prop::collection::vec((1e-3f64..1e4, 0f64..0.2), 5),
    ) {
        let model = Model::parse(PRODUCT_MODELS[which]).unwrap();
        let inputs = positive_inputs(&model, &values);
        let budget = propagate(&model, &inputs).unwrap();
        // Closed form: relative terms weighted by the exponent of each input.
        let exponents: &[f64] = match which {
            0..=2 => &[1.0; 5],
            3 => &[2.0, 1.0],
            _ => &[1.0, 3.0, 1.0, 1.0],
        };
        let rels: Vec<RelativeUncertainty> = model
            .inputs()
            .iter()
            .zip(exponents)
            .map(|(n, k)| RelativeUncertainty::new(k * inputs[n].relative().unwrap().ratio()).unwrap())
            .collect();
        let closed = combine_relative(&rels).unwrap().ratio() * budget.value.abs();
        let scale = closed.max(f64::MIN_POSITIVE);
        prop_assert!((budget.combined - closed).abs() <= 1e-12 * scale,
            "{} vs {}", budget.combined, closed);
    }

    #[test]
    fn combined_squared_is_sum_of_terms(
        values in prop::collection::vec((-1e3f64..1e3, 0f64..10.0), 4),
    ) {
        let model = Model::parse("a * b - c / (1 + d^2) + 2 * a").unwrap();
        let inputs: Inputs = model
            .inputs()
            .iter()
            .zip(&values)
            .map(|(n, &(v, u))| (n.clone(), Measurement::new(v, u).unwrap()))
            .collect();
        let budget = propagate(&model, &inputs).unwrap();
        prop_assert_eq!(budget.contributions.len(), 4);
        let sum: f64 = budget.contributions.iter().map(|c| c.term).sum();
        prop_assert!(ulps_apart(budget.combined * budget.combined, sum) <= 4);
        for c in &budget.contributions {
            prop_assert!(c.term >= 0.0);
            prop_assert_eq!(c.term, (c.partial * c.measurement.std_uncertainty()).powi(2));
        }
    }

    #[test]
    fn zeroing_one_uncertainty_removes_only_its_term(
        values in prop::collection::vec((0.1f64..100.0, 0.001f64..1.0), 4),
        k in 0usize..4,
    ) {
        let model = Model::parse("a * b + c / d").unwrap();
        let mut inputs: Inputs = model
            .inputs()
            .iter()
            .zip(&values)
            .map(|(n, &(v, u))| (n.clone(), Measurement::new(v, u).unwrap()))
            .collect();
        let before = propagate(&model, &inputs).unwrap();
        let name = model.inputs()[k].clone();
        let zeroed = inputs[&name].with_uncertainty(0.0).unwrap();
        inputs.insert(name.clone(), zeroed);
        let after = propagate(&model, &inputs).unwrap();
        for (b, a) in before.contributions.iter().zip(&after.contributions) {
            if a.input == name {
                prop_assert_eq!(a.term, 0.0);
            } else {
                prop_assert_eq!(a.term, b.term);
            }
        }
    }

    #[test]
    fn an_extra_positive_term_increases_combined(
        values in prop::collection::vec((0.1f64..100.0, 0.001f64..1.0), 2),
        extra_unc in 1e-3f64..10.0,
        partial in 0.1f64..10.0,
    ) {
        let model = Model::parse("a / b").unwrap();
        let inputs: Inputs = model
            .inputs()
            .iter()
            .zip(&values)
            .map(|(n, &(v, u))| (n.clone(), Measurement::new(v, u).unwrap()))
            .collect();
        let budget = propagate(&model, &inputs).unwrap();
        let extended = budget.with_term("extra", Measurement::new(1.0, extra_unc).unwrap(), partial);
        prop_assert!(extended.combined > budget.combined);
    }
}

//! Algorithmic resolution of marked ideals: the invariant functions
//! (ω, t, Γ), nice objects, maximal-contact descent in dimension, and the
//! global driver with its truncated variants (principalization and
//! embedded resolution).

pub mod analysis;
pub mod driver;
pub mod rfvalue;

pub use analysis::{
    align_linear, codim1_components, descend, gamma_case, lower_analysis, maximal_contact,
    nice_object, omega_info, sing_ideal, t_case, t_info, transform_tower, Center, ComponentEq,
    Evaluation, NiceObject, OmegaInfo, ResolveError, TCaseOut, TInfo, Tower, WorkChart,
};
pub use driver::{
    principalize, resolve, resolve_core, resolve_embedded, resolve_lenient, Principalization,
    Resolution,
    ResolveOptions, StepRecord, StopRule,
};
pub use rfvalue::{GammaValue, RFValue};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, rat, rat_int, CoeffKind, Ring};
    use crate::geom::MarkedChart;
    use std::collections::BTreeSet;

    fn chart(vars: &[&str], gens: &[&str], b: u64) -> MarkedChart {
        let r = Ring::rational(vars);
        let gens = gens.iter().map(|s| parse_poly(&r, s).unwrap()).collect();
        MarkedChart::root(&r, gens, b, &[])
    }

    #[test]
    fn cusp_resolves_in_one_step_with_known_value() {
        // hand-computed: ω = 2/2 = 1, no old divisors, descent to (x³, 2)
        // gives the pair (3/2, 0, ∞); centre is the origin
        let res = resolve(chart(&["x", "y"], &["y^2 - x^3"], 2), &Default::default()).unwrap();
        assert!(res.resolved());
        assert_eq!(res.steps.len(), 1);
        let expected = RFValue::pair(
            rat_int(1),
            0,
            RFValue::pair(rat(3, 2), 0, RFValue::Top),
        );
        assert_eq!(res.steps[0].value, expected);
        assert_eq!(res.steps[0].centers.len(), 1);
        assert_eq!(res.steps[0].centers[0].1, vec!["(x,y)".to_string()]);
        // two chart leaves, both with trivial singular locus
        assert_eq!(res.tree.leaves().len(), 2);
    }

    #[test]
    fn empty_singular_locus_means_root_only_tree() {
        // t·x + x³ with mark 3: Δ² contains a unit, so Sing is empty
        let r = Ring::with_base(&["t", "x"], "t", CoeffKind::Rational);
        let gens = vec![parse_poly(&r, "t*x + x^3").unwrap()];
        let root = MarkedChart::root(&r, gens, 3, &[]);
        let res = resolve(root, &Default::default()).unwrap();
        assert!(res.resolved());
        assert!(res.steps.is_empty());
        assert_eq!(res.tree.nodes.len(), 1);
    }

    #[test]
    fn surface_with_line_center_blows_up_once() {
        // x² − y² on A³ over the base t: Sing = V(x,y) (a line), one
        // blow-up with centre V(x,y) resolves
        let r = Ring::with_base(&["t", "x", "y"], "t", CoeffKind::Rational);
        let gens = vec![parse_poly(&r, "x^2 - y^2").unwrap()];
        let root = MarkedChart::root(&r, gens, 2, &[]);
        let res = resolve(root, &Default::default()).unwrap();
        assert!(res.resolved());
        assert_eq!(res.steps.len(), 1);
        assert_eq!(res.steps[0].centers[0].1, vec!["(x,y)".to_string()]);
    }

    #[test]
    fn tacnode_and_umbrella_resolve_within_cap() {
        for (vars, f) in [
            (vec!["x", "y"], "y^2 - x^4"),
            (vec!["x", "y", "z"], "x^2 - y^2*z"),
        ] {
            let vrefs: Vec<&str> = vars.clone();
            let res = resolve(chart(&vrefs, &[f], 2), &Default::default()).unwrap();
            assert!(res.resolved(), "{f} did not resolve");
            assert!(res.steps.len() <= 16, "{f} took {} steps", res.steps.len());
        }
    }

    #[test]
    fn values_weakly_decrease_and_strictly_within_t_regime() {
        for (vars, f) in [
            (vec!["x", "y"], "y^2 - x^3"),
            (vec!["x", "y"], "y^2 - x^4"),
            (vec!["x", "y", "z"], "x^2 - y^2*z"),
        ] {
            let res = resolve(chart(&vars, &[f], 2), &Default::default()).unwrap();
            for w in res.steps.windows(2) {
                assert!(
                    w[1].value <= w[0].value,
                    "{f}: value rose from {} to {}",
                    w[0].value.render(),
                    w[1].value.render()
                );
            }
        }
    }

    #[test]
    fn principalize_single_variable_is_extraction() {
        let p = principalize(chart(&["x", "y"], &["x"], 1), &Default::default()).unwrap();
        assert!(!p.preexisting_monomial);
        let res = &p.resolution;
        assert_eq!(res.steps.len(), 1);
        // the leaf controlled transform is trivial; x became a divisor
        let leaf = &res.tree.nodes[*res.tree.leaves().first().unwrap()];
        assert!(leaf.chart.proper_ideal().is_trivial().unwrap());
        assert_eq!(leaf.chart.divisors.len(), 1);
    }

    #[test]
    fn principalize_detects_existing_monomial() {
        let r = Ring::rational(&["x", "y"]);
        let gens = vec![parse_poly(&r, "x^2*y").unwrap()];
        let root = MarkedChart::root(&r, gens, 1, &[0, 1]);
        let p = principalize(root, &Default::default()).unwrap();
        assert!(p.preexisting_monomial);
        assert!(p.resolution.steps.is_empty());
    }

    #[test]
    fn embedded_cusp_stops_when_smooth_and_crossing() {
        let res =
            resolve_embedded(chart(&["x", "y"], &["y^2 - x^3"], 1), &Default::default()).unwrap();
        let eta = res.stopped_at.expect("embedded run must truncate");
        assert_eq!(eta, 3, "the cusp needs three blow-ups for normal crossings");
        assert_eq!(res.steps.len(), 3);
    }

    #[test]
    fn monomial_stage_orders_divisors_combinatorially() {
        // principalize (x³·(something)) shape: x²+y³ has ω>0 first, then
        // a monomial tail; here just check the gamma evaluation directly
        // on a synthetic chart: I = x²y³ presented as proper (1) with
        // exceptional exponents 2 and 3.
        let r = Ring::rational(&["x", "y"]);
        let gens = vec![parse_poly(&r, "x^2*y^3").unwrap()];
        let mut c = MarkedChart::root(&r, gens, 4, &[0, 1]);
        c.proper = vec![parse_poly(&r, "1").unwrap()];
        c.exc_exp.insert(0, 2);
        c.exc_exp.insert(1, 3);
        let sing = sing_ideal(&c).interreduced().unwrap();
        assert!(!sing.is_trivial().unwrap());
        let eval = gamma_case(&c, &sing).unwrap();
        // only the joint stratum V(x,y) reaches 2+3 ≥ 4: Γ = (2, 5/4, [0,1])
        match &eval.value {
            RFValue::Monomial(g) => {
                assert_eq!(g.p, 2);
                assert_eq!(g.ratio, rat(5, 4));
                assert_eq!(g.indices, vec![0, 1]);
            }
            v => panic!("expected monomial value, got {}", v.render()),
        }
        let want: BTreeSet<usize> = [0usize, 1].into_iter().collect();
        assert_eq!(eval.centers[0].vars, want);
    }
}

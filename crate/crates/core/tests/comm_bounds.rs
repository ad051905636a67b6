//! Communication-side invariants on generated instances, under seeds
//! disjoint from the acceptance suite's.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use pqlab_core::commlab::{
    convert_to_classical,
    gen::{conversion_instance, two_sided_instance, InstanceKind},
    mutual_information, one_way_cost_single, one_way_cost_two_sided, refine_audit,
    single_input_transform, Distribution, SingleInputProblem,
};

fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

#[test]
fn refinement_chain_holds_on_generated_instances() {
    let mut r = rng(1001);
    for i in 0..30 {
        let inst = conversion_instance(&mut r, InstanceKind::LowInformation);
        let audit = refine_audit(&inst.family, &inst.problem).unwrap();
        assert!(audit.all_per_x_ok(), "low instance {i}");
        assert!(audit.aggregate_ok, "low instance {i}");

        let inst = conversion_instance(&mut r, InstanceKind::HighInformation);
        let audit = refine_audit(&inst.family, &inst.problem).unwrap();
        assert!(audit.all_per_x_ok(), "high instance {i}");
        assert!(audit.aggregate_ok, "high instance {i}");
        assert!(audit.simplified_ok, "high instance {i}: m = {}", audit.mutual_info);
    }
}

#[test]
fn conversion_error_stays_within_eps() {
    let mut r = rng(1003);
    for _ in 0..10 {
        let inst = conversion_instance(&mut r, InstanceKind::LowInformation);
        let m = mutual_information(&inst.family);
        let report =
            convert_to_classical(&inst.family, &inst.problem, 0.5, m, 200, 1 << 20, &mut r)
                .unwrap();
        assert!(report.empirical_error <= 0.5);
        assert!((report.mutual_info - m).abs() <= 1e-12);
        assert_eq!(report.per_input_hit.len(), inst.family.num_inputs());
    }
}

#[test]
fn cost_search_is_monotone_in_the_error_budget() {
    let mut r = rng(1005);
    for _ in 0..20 {
        let nx = r.random_range(3..=6usize);
        let nz = r.random_range(2..=5usize);
        let valid: Vec<Vec<bool>> = (0..nx)
            .map(|_| loop {
                let row: Vec<bool> = (0..nz).map(|_| r.random()).collect();
                if row.iter().any(|&b| b) {
                    break row;
                }
            })
            .collect();
        let p = SingleInputProblem::new(valid, Distribution::uniform(nx)).unwrap();
        let mut last = usize::MAX;
        for eps in [0.0, 0.1, 0.25, 0.5, 0.75, 1.0] {
            let c = one_way_cost_single(&p, eps).unwrap().messages;
            assert!(c <= last, "cost rose from {last} to {c} at eps={eps}");
            last = c;
        }
    }
}

#[test]
fn transformed_cost_never_exceeds_the_original() {
    let mut r = rng(1007);
    for i in 0..10 {
        let p = two_sided_instance(&mut r, 7);
        let (eps, delta) = if i % 2 == 0 {
            (1.0, 0.0)
        } else {
            let min_pos = (0..p.num_x())
                .map(|x| p.conditional_y(x).unwrap())
                .flat_map(|d| d.probs().to_vec())
                .filter(|&w| w > 0.0)
                .fold(f64::INFINITY, f64::min);
            (0.9 * min_pos, 0.2)
        };
        let t = single_input_transform(&p, eps, 16384).unwrap();
        let original = one_way_cost_two_sided(&p, delta).unwrap();
        let transformed = one_way_cost_single(&t.problem, delta).unwrap();
        assert!(transformed.messages <= original.messages, "instance {i}");
    }
}

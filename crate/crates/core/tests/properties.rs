mod common;

use common::{random_gate, random_state};
use proptest::prelude::*;
use qdepth::ir::json::{from_json, to_json};
use qdepth::simulator::{run, unitary_of};
use qdepth::synthesis::{modq_constant_depth, modq_sequential, CatBuilder};
use qdepth::verify::OracleGate;
use qdepth::{Circuit, CircuitBuilder, Gate, Layer, LayeringDiscipline, QubitRole};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random circuit: each layer packs random gates greedily, skipping any that
/// would violate `discipline`.
fn random_circuit(
    seed: u64,
    width: usize,
    depth: usize,
    discipline: LayeringDiscipline,
) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = CircuitBuilder::new(vec![QubitRole::Input; width], discipline);
    for _ in 0..depth {
        let mut gates: Vec<Gate> = Vec::new();
        for _ in 0..3 {
            let mut trial = gates.clone();
            trial.push(random_gate(&mut rng, width));
            if qdepth::ir::validate_layer(&Layer::new(trial.clone()), discipline, width).is_ok() {
                gates = trial;
            }
        }
        b.layer(gates);
    }
    b.build().unwrap()
}

fn discipline() -> impl Strategy<Value = LayeringDiscipline> {
    prop_oneof![
        Just(LayeringDiscipline::Strict),
        Just(LayeringDiscipline::WithFanout)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_composes_to_identity(seed: u64, width in 2usize..=5, depth in 1usize..=5, d in discipline()) {
        let c = random_circuit(seed, width, depth, d);
        let u = unitary_of::<f64>(&c.compose(&c.inverse()).unwrap()).unwrap();
        prop_assert!(u.max_abs_diff(&qdepth::Unitary::identity(1 << width)) <= 1e-12);
    }

    #[test]
    fn inverse_is_adjoint(seed: u64, width in 2usize..=5, depth in 1usize..=5) {
        let c = random_circuit(seed, width, depth, LayeringDiscipline::WithFanout);
        let u = unitary_of::<f64>(&c).unwrap();
        let v = unitary_of::<f64>(&c.inverse()).unwrap();
        prop_assert!(v.max_abs_diff(&u.adjoint()) <= 1e-12);
    }

    #[test]
    fn compose_adds_depth(a: u64, b: u64, width in 2usize..=5, da in 0usize..=4, db in 0usize..=4) {
        let x = random_circuit(a, width, da, LayeringDiscipline::Strict);
        let y = random_circuit(b, width, db, LayeringDiscipline::WithFanout);
        let xy = x.compose(&y).unwrap();
        prop_assert_eq!(xy.depth(), x.depth() + y.depth());
        prop_assert_eq!(xy.discipline(), LayeringDiscipline::WithFanout);
    }

    #[test]
    fn strict_layers_are_valid_with_fanout(seed: u64, width in 2usize..=6, depth in 1usize..=6) {
        let c = random_circuit(seed, width, depth, LayeringDiscipline::Strict);
        for layer in c.layers() {
            prop_assert!(qdepth::ir::validate_layer(layer, LayeringDiscipline::WithFanout, width).is_ok());
        }
    }

    #[test]
    fn layer_order_is_irrelevant(seed: u64, width in 2usize..=6, d in discipline()) {
        let c = random_circuit(seed, width, 1, d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        let mut gates = c.layers().first().map(|l| l.gates().to_vec()).unwrap_or_default();
        gates.shuffle(&mut rng);
        let shuffled = Circuit::new(c.roles().to_vec(), d, vec![Layer::new(gates)]).unwrap();
        let u = unitary_of::<f64>(&c).unwrap();
        prop_assert!(unitary_of::<f64>(&shuffled).unwrap().max_abs_diff(&u) <= 1e-12);
    }

    #[test]
    fn norm_is_preserved(seed: u64, width in 1usize..=8, depth in 1usize..=6) {
        let width = width.max(2);
        let c = random_circuit(seed, width, depth, LayeringDiscipline::WithFanout);
        let mut rng = ChaCha8Rng::seed_from_u64(!seed);
        let out = run(&c, random_state(&mut rng, width)).unwrap();
        prop_assert!((out.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn f32_tracks_f64(seed: u64, width in 2usize..=5, depth in 1usize..=4) {
        let c = random_circuit(seed, width, depth, LayeringDiscipline::WithFanout);
        let u = unitary_of::<f64>(&c).unwrap();
        let v = unitary_of::<f32>(&c).unwrap();
        prop_assert!(v.cast::<f64>().max_abs_diff(&u) <= 1e-5);
    }

    #[test]
    fn oracle_matrices_are_unitary(seed: u64, width in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_gate(&mut rng, width);
        let oracle = OracleGate::from_gate(&g);
        let m = oracle.matrix(width);
        prop_assert!(m.unitarity_error() <= 1e-12);
        if oracle.is_monomial() {
            for j in 0..1usize << width {
                let (i, z) = oracle.oracle_apply(j).unwrap();
                prop_assert!((z.norm() - 1.0).abs() <= 1e-15);
                prop_assert_eq!(m[(i, j)], z);
            }
        }
    }

    #[test]
    fn json_round_trip(seed: u64, width in 2usize..=6, depth in 0usize..=5, d in discipline()) {
        let c = random_circuit(seed, width, depth, d);
        let back = from_json(&to_json(&c)).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn modq_depths(n in 2usize..=40, q in 2usize..=9) {
        let wf = modq_constant_depth(n, q, LayeringDiscipline::WithFanout).unwrap().depth();
        prop_assert_eq!(wf, modq_constant_depth(2, q, LayeringDiscipline::WithFanout).unwrap().depth());
        prop_assert!(modq_sequential(n + 1, q).unwrap().depth() > modq_sequential(n, q).unwrap().depth());
    }

    #[test]
    fn cat_builders_agree_on_basis_zero_and_one(n in 1usize..=9, one: bool) {
        let input = qdepth::State::basis(n, one as usize);
        let want = if one { (1 << n) - 1 } else { 0 };
        for b in [CatBuilder::Fanout, CatBuilder::LogDepth] {
            let out = run(&b.circuit(n).unwrap(), input.clone()).unwrap();
            prop_assert!((out.amplitude(want).re - 1.0).abs() <= 1e-15);
        }
    }
}

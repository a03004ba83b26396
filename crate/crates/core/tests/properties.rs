use grm_core::{
    decode_ge, decode_ld, decode_pld, interpolate_line, FieldElement, FieldSpec, GrmCode, LineView,
    ReceptionState,
};
use proptest::prelude::*;

const ORDERS: [usize; 10] = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27];
const CODES: [(usize, usize, usize); 5] = [(1, 2, 3), (2, 2, 4), (1, 3, 3), (3, 2, 5), (6, 2, 8)];

fn field_and_triple() -> impl Strategy<Value = (FieldSpec, [FieldElement; 3])> {
    prop::sample::select(ORDERS.to_vec()).prop_flat_map(|q| {
        let elem = (0..q).prop_map(|v| FieldElement(v as u8));
        ([elem.clone(), elem.clone(), elem]).prop_map(move |t| (FieldSpec::new(q).unwrap(), t))
    })
}

/// A code, a message and an ordering of all positions.
fn code_message_order() -> impl Strategy<Value = (GrmCode, Vec<FieldElement>, Vec<usize>)> {
    prop::sample::select(CODES.to_vec()).prop_flat_map(|(r, m, q)| {
        let code = GrmCode::new(r, m, q).unwrap();
        let (k, n) = (code.params().k, code.params().n);
        let message = prop::collection::vec((0..q).prop_map(|v| FieldElement(v as u8)), k);
        let order = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
        (Just(code), message, order)
    })
}

proptest! {
    #[test]
    fn field_axioms((f, [a, b, c]) in field_and_triple()) {
        prop_assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
            prop_assert_eq!(f.div(f.mul(b, a), a).unwrap(), b);
        }
    }

    #[test]
    fn systematic_round_trip((code, message, _) in code_message_order()) {
        let word = code.encode(&message).unwrap();
        prop_assert!(code.is_codeword(&word));
        prop_assert_eq!(code.extract_message(&word).unwrap(), message.clone());
        for (i, &pos) in code.info_set().iter().enumerate() {
            prop_assert_eq!(word[pos], message[i]);
        }
    }

    #[test]
    fn codewords_are_low_degree_on_every_line((code, message, _) in code_message_order()) {
        let f = code.field();
        let r = code.params().r;
        let word = code.encode(&message).unwrap();
        for line in code.lines().lines() {
            let mut values: Vec<_> = line.points.iter().map(|&p| Some(word[p])).collect();
            for v in values.iter_mut().skip(r + 1) {
                *v = None;
            }
            let rebuilt = interpolate_line(f, &LineView::new(f, values), r).unwrap();
            let expected: Vec<_> = line.points.iter().map(|&p| word[p]).collect();
            prop_assert_eq!(rebuilt, expected);
        }
    }

    #[test]
    fn decoders_recover_true_values_and_ge_dominates(
        (code, message, order) in code_message_order(),
        cut in 0.0f64..=1.0,
    ) {
        let word = code.encode(&message).unwrap();
        let t = (cut * order.len() as f64) as usize;
        let state = ReceptionState::from_positions(&code, &word, &order[..t]).unwrap();
        let ld = decode_ld(&code, &state).unwrap();
        let ge = decode_ge(&code, &state).unwrap();
        for (p, &truth) in word.iter().enumerate() {
            if let Some(v) = ld.final_state.value(p) {
                prop_assert_eq!(v, truth);
                prop_assert_eq!(ge.final_state.value(p), Some(v));
            }
            if let Some(v) = ge.final_state.value(p) {
                prop_assert_eq!(v, truth);
            }
        }
    }

    #[test]
    fn local_decoding_is_monotone((code, message, order) in code_message_order(), a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let word = code.encode(&message).unwrap();
        let n = order.len();
        let (lo, hi) = ((a.min(b) * n as f64) as usize, (a.max(b) * n as f64) as usize);
        let small = decode_ld(&code, &ReceptionState::from_positions(&code, &word, &order[..lo]).unwrap()).unwrap();
        let large = decode_ld(&code, &ReceptionState::from_positions(&code, &word, &order[..hi]).unwrap()).unwrap();
        for p in 0..n {
            prop_assert!(!small.final_state.is_known(p) || large.final_state.is_known(p));
        }
    }

    #[test]
    fn progressive_decoding_ignores_arrival_order(
        (code, message, order) in code_message_order(),
        cut in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        let word = code.encode(&message).unwrap();
        let t = ((cut * order.len() as f64) as usize).max(1);
        let mut arrivals: Vec<_> = order[..t].iter().map(|&p| (p, word[p])).collect();
        let first = decode_pld(&code, &arrivals).unwrap().pop().unwrap();
        let mut rng = grm_core::sim::trial_rng(seed, 0);
        rand::seq::SliceRandom::shuffle(&mut arrivals[..], &mut rng);
        let second = decode_pld(&code, &arrivals).unwrap().pop().unwrap();
        prop_assert_eq!(first.final_state.symbols(), second.final_state.symbols());
    }

    #[test]
    fn any_erasure_set_below_distance_is_recoverable((code, message, order) in code_message_order(), cut in 0.0f64..=1.0) {
        let word = code.encode(&message).unwrap();
        let d = code.params().d;
        let erased = (cut * (d - 1) as f64).round() as usize;
        let state = ReceptionState::from_positions(&code, &word, &order[erased..]).unwrap();
        let report = decode_ge(&code, &state).unwrap();
        prop_assert!(report.full_decode);
        prop_assert_eq!(report.final_state.values(), word.iter().copied().map(Some).collect::<Vec<_>>());
    }
}

//! Echelon constructions over every element of the finite Weyl groups of
//! ranks 2 to 4.

use aspectra_core::affine::{quotient_to_finite, AffineModel, FinitePermutation};
use aspectra_core::echelon::{a_echelon, block_echelon, echelon_for_cycle_type, lift_to_word, EchelonForm};
use aspectra_core::reps::battery;

fn permutations(size: usize) -> Vec<FinitePermutation> {
    fn rec(prefix: &mut Vec<usize>, size: usize, out: &mut Vec<FinitePermutation>) {
        if prefix.len() == size {
            out.push(FinitePermutation::from_images(prefix.clone()).unwrap());
            return;
        }
        for v in 1..=size {
            if !prefix.contains(&v) {
                prefix.push(v);
                rec(prefix, size, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), size, &mut out);
    out
}

#[test]
fn every_finite_element_reaches_its_echelon_form() {
    for n in 2..=4 {
        let model = AffineModel::new(n).unwrap();
        let reps = battery(n).unwrap();
        let all = permutations(n + 1);
        assert_eq!(all.len(), (1..=n + 1).product::<usize>());
        for sigma in all {
            let x = lift_to_word(&sigma, n);
            assert!(x.is_finite_alphabet());
            assert_eq!(quotient_to_finite(&model.eval(&x)), sigma);
            let e = a_echelon(&x).unwrap();
            let w = e.to_word();
            assert_eq!(EchelonForm::from_word(&w), Some(e.clone()), "`{w}`");
            assert_eq!(e.cycle_type(), sigma.cycle_type());
            assert!(w.len() <= x.len(), "`{x}` -> `{w}`");
            // Words already of echelon shape are left alone; all others get
            // the compact form of their cycle type.
            match EchelonForm::from_word(&x) {
                Some(already) => assert_eq!(e, already),
                None => assert_eq!(e, echelon_for_cycle_type(&sigma.cycle_type(), n)),
            }
            let b = block_echelon(&e);
            assert_eq!(b.to_echelon().cycle_type(), sigma.cycle_type());
            for (name, r) in &reps {
                let chi = r.character(&x).unwrap();
                assert_eq!(r.character(&w).unwrap(), chi, "{name} on `{x}`");
                assert_eq!(r.character(&b.to_word()).unwrap(), chi, "{name} on `{x}`");
            }
        }
    }
}

use aspectra_core::affine::AffineModel;
use aspectra_core::echelon::{a_echelon, block_echelon, tilde_echelon};
use aspectra_core::words::{Letter, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_word(rng: &mut ChaCha8Rng, n: usize, len: usize) -> Word {
    let letters = (0..len)
        .map(|_| match rng.random_range(0..3) {
            0 => Letter::A(rng.random_range(1..=n + 1)),
            1 => Letter::g(rng.random_range(1..=n)),
            _ => Letter::g_inv(rng.random_range(1..=n)),
        })
        .collect();
    Word::new(n, letters).unwrap()
}

#[test]
fn tilde_echelon_on_random_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 2..=5 {
        let model = AffineModel::new(n).unwrap();
        for _ in 0..200 {
            let len = rng.random_range(0..12);
            let w = random_word(&mut rng, n, len);
            let t = tilde_echelon(&model, &w).unwrap();
            t.trace.verify(&model).unwrap();
            t.check_shape().unwrap();
            assert_eq!(t.trace.current(), &t.to_word());
            let e = t.block_part.to_echelon();
            assert_eq!(block_echelon(&e), t.block_part);
            assert_eq!(a_echelon(&t.block_part.to_word()).unwrap(), e);
        }
    }
}

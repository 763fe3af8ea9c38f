//! Fundamental representations of the quantized coordinate ring of G2,
//! the six-fold coproduct and the intertwiner between the two reduced
//! words of the longest Weyl group element.

mod props;
mod solve;
mod table;

pub use props::{check_intertwiner_props, verify_relations, BlockCheck, PropsReport};
pub use props::state_norm;
pub use solve::{solve_block_global, solve_intertwiner, GlobalCheck, SolveError, SolveOptions};
pub use table::{IntertwinerBlock, IntertwinerTable};

use crate::lj::sigma_tilde;
use crate::qboson::{Flavor, Op};
use crate::scalar::Scalar;
use crate::tensor::{BlockMap, Expanded, TensorWord, WeightVector, SLOT_FLAVORS};

/// Entry `pi_rep(t_{i,j})`, `1 <= i, j <= 7`. `rep = 1` uses base `q`,
/// `rep = 2` base `q^3`.
pub fn pi_entry(rep: u8, i: usize, j: usize) -> Op {
    match rep {
        1 => pi1(i, j),
        2 => pi2(i, j),
        _ => panic!("representation index must be 1 or 2"),
    }
}

fn pi1(i: usize, j: usize) -> Op {
    let f = Flavor::One;
    let ap = Op::a_plus(f);
    let am = Op::a_minus(f);
    let k = Op::k(f);
    let c = |a: &Op, b: &Op| a.compose(b).expect("same flavor");
    let r = Scalar::r();
    match (i, j) {
        (1, 1) | (6, 6) => am,
        (1, 2) | (6, 7) => k,
        (2, 1) | (7, 6) => k.neg(),
        (2, 2) | (7, 7) => ap,
        (3, 3) => c(&am, &am),
        (3, 4) => c(&k, &am).scale(&r),
        (3, 5) | (5, 3) => c(&k, &k),
        (4, 3) => c(&am, &k).neg(),
        (4, 4) => sigma_tilde(),
        (4, 5) => c(&k, &ap),
        // -r a+ k; the ordering -r k a+ makes the relations inconsistent.
        (5, 4) => c(&ap, &k).scale(&r.neg()),
        (5, 5) => c(&ap, &ap),
        _ => Op::zero(f),
    }
}

fn pi2(i: usize, j: usize) -> Op {
    let f = Flavor::Three;
    match (i, j) {
        (1, 1) | (4, 4) | (7, 7) => Op::identity(f),
        (2, 2) | (5, 5) => Op::a_minus(f),
        (2, 3) | (5, 6) => Op::k(f),
        (3, 2) | (6, 5) => Op::k(f).neg(),
        (3, 3) | (6, 6) => Op::a_plus(f),
        _ => Op::zero(f),
    }
}

/// Which side of the intertwining relation a coproduct word belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// `pi_{212121}(t_{i,j})`, multiplying the intertwiner from the left.
    Direct,
    /// The tensor-reversed `pi_{121212}(t_{i,j})`, multiplying from the right.
    Reversed,
}

/// Paths `(i, l2, ..., l6, j)` whose six factors are all nonzero.
pub fn coproduct_paths(i: usize, j: usize, variant: Variant) -> Vec<[usize; 7]> {
    let mut out = Vec::new();
    let mut path = [0usize; 7];
    path[0] = i;
    path[6] = j;
    fn rec(pos: usize, path: &mut [usize; 7], variant: Variant, out: &mut Vec<[usize; 7]>) {
        // factor between path[pos-1] and path[pos]; position pos-1 in 0..6
        let rep = |p: usize| -> u8 {
            match variant {
                Variant::Direct => if p % 2 == 0 { 2 } else { 1 },
                Variant::Reversed => if p % 2 == 0 { 1 } else { 2 },
            }
        };
        if pos == 6 {
            if !pi_entry(rep(5), path[5], path[6]).is_zero() {
                out.push(*path);
            }
            return;
        }
        for l in 1..=7 {
            if pi_entry(rep(pos - 1), path[pos - 1], l).is_zero() {
                continue;
            }
            path[pos] = l;
            rec(pos + 1, path, variant, out);
        }
    }
    rec(1, &mut path, variant, &mut out);
    out
}

/// The coproduct word of `t_{i,j}` as a tensor word on the six slots.
pub fn coproduct_word(i: usize, j: usize, variant: Variant) -> TensorWord {
    let mut w = TensorWord::new();
    for path in coproduct_paths(i, j, variant) {
        let factors: [Op; 6] = match variant {
            Variant::Direct => std::array::from_fn(|s| {
                let rep = if s % 2 == 0 { 2 } else { 1 };
                pi_entry(rep, path[s], path[s + 1])
            }),
            // pi_1 (x) pi_2 (x) ... (x) pi_2 with the tensor order reversed.
            Variant::Reversed => std::array::from_fn(|s| {
                let pos = 5 - s;
                let rep = if pos % 2 == 0 { 1 } else { 2 };
                pi_entry(rep, path[pos], path[pos + 1])
            }),
        };
        debug_assert!(factors.iter().zip(SLOT_FLAVORS).all(|(f, fl)| f.flavor() == fl));
        w.push(Scalar::one(), factors);
    }
    w
}

/// Both sides of the relation for one generator, expanded.
#[derive(Clone, Debug)]
pub struct Generator {
    pub i: usize,
    pub j: usize,
    pub direct: Expanded,
    pub reversed: Expanded,
    pub shift: WeightVector,
}

impl Generator {
    pub fn new(i: usize, j: usize) -> Generator {
        let direct = coproduct_word(i, j, Variant::Direct).expand();
        let reversed = coproduct_word(i, j, Variant::Reversed).expand();
        let sd = direct.weight_shift().expect("direct word is weight homogeneous");
        let sr = reversed.weight_shift().expect("reversed word is weight homogeneous");
        assert_eq!(sd, sr, "both sides of t_{{{i},{j}}} shift the weight equally");
        Generator { i, j, direct, reversed, shift: sd }
    }

    /// Matrices `(A, B)` of the two sides from block `src` into `src + shift`.
    pub fn action(&self, src: WeightVector) -> (BlockMap, BlockMap) {
        (self.direct.block_map(src).unwrap(), self.reversed.block_map(src).unwrap())
    }
}

/// All 49 generators.
pub fn generators() -> Vec<Generator> {
    let mut out = Vec::with_capacity(49);
    for i in 1..=7 {
        for j in 1..=7 {
            out.push(Generator::new(i, j));
        }
    }
    out
}

/// Matrix of one side of a generator restricted to a source block.
pub fn generator_action(i: usize, j: usize, variant: Variant, src: WeightVector) -> BlockMap {
    let w = coproduct_word(i, j, variant).expand();
    w.block_map(src).expect("generator words are weight homogeneous")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::sc;

    #[test]
    fn table_examples() {
        assert_eq!(pi_entry(2, 1, 1), Op::identity(Flavor::Three));
        let want = Op::a_plus(Flavor::One).compose(&Op::k(Flavor::One)).unwrap().scale(&sc("-r"));
        assert_eq!(pi_entry(1, 5, 4), want);
        assert!(pi_entry(1, 1, 6).is_zero());
        assert_eq!(pi_entry(1, 4, 4), sigma_tilde());
        assert_eq!(pi_entry(2, 2, 3), Op::k(Flavor::Three));
    }

    #[test]
    fn nonzero_counts() {
        let count = |rep| (1..=7).flat_map(|i| (1..=7).map(move |j| (i, j))).filter(|&(i, j)| !pi_entry(rep, i, j).is_zero()).count();
        assert_eq!(count(1), 17);
        assert_eq!(count(2), 11);
    }

    fn brute_force_paths(i: usize, j: usize, reps: [u8; 6]) -> usize {
        let mut n = 0;
        for code in 0..7usize.pow(5) {
            let mut path = [i, 0, 0, 0, 0, 0, j];
            let mut c = code;
            for p in path.iter_mut().take(6).skip(1) {
                *p = c % 7 + 1;
                c /= 7;
            }
            if (0..6).all(|s| !pi_entry(reps[s], path[s], path[s + 1]).is_zero()) {
                n += 1;
            }
        }
        n
    }

    #[test]
    fn path_counts() {
        assert_eq!(coproduct_paths(1, 6, Variant::Direct).len(), 1);
        assert_eq!(coproduct_paths(1, 6, Variant::Reversed).len(), 6);
        for (i, j) in [(7, 7), (1, 1), (3, 5), (2, 6)] {
            assert_eq!(coproduct_paths(i, j, Variant::Direct).len(), brute_force_paths(i, j, [2, 1, 2, 1, 2, 1]));
            assert_eq!(coproduct_paths(i, j, Variant::Reversed).len(), brute_force_paths(i, j, [1, 2, 1, 2, 1, 2]));
        }
        assert_eq!(coproduct_paths(1, 1, Variant::Direct).len(), 5);
        assert_eq!(coproduct_paths(1, 1, Variant::Reversed).len(), 5);
        assert_eq!(coproduct_paths(1, 5, Variant::Direct).len(), 5);
    }

    #[test]
    fn single_path_for_t16() {
        let w = coproduct_word(1, 6, Variant::Direct);
        let f = &w.terms[0].1;
        let k1 = Op::k(Flavor::One);
        let k3 = Op::k(Flavor::Three);
        assert_eq!(f[0], Op::identity(Flavor::Three));
        assert_eq!(f[1], k1);
        assert_eq!(f[2], k3);
        assert_eq!(f[3], k1.pow(2));
        assert_eq!(f[4], k3);
        assert_eq!(f[5], Op::a_minus(Flavor::One));
    }

    #[test]
    fn all_generators_homogeneous() {
        let gens = generators();
        assert_eq!(gens.len(), 49);
        let g71 = gens.iter().find(|g| g.i == 7 && g.j == 1).unwrap();
        assert_eq!(g71.shift, WeightVector::new(0, 0));
        let g11 = gens.iter().find(|g| g.i == 1 && g.j == 1).unwrap();
        assert_eq!(g11.shift, WeightVector::new(-2, -4));
        for g in &gens {
            let (dp, dq) = (g.shift.p, g.shift.q);
            assert!(dp * dq >= 0, "mixed-sign shift for t_{},{}", g.i, g.j);
        }
    }

    #[test]
    fn example_column_of_block_2_4() {
        let t = solve_intertwiner(2, 4, &SolveOptions::default()).unwrap();
        let want = [
            ([0, 0, 0, 2, 0, 0], "-q^3*(1 - q^4)*(1 - q^6)*(1 - q^2 - q^6)"),
            ([0, 0, 1, 0, 0, 1], "-q^2*(1 - q^4)^2*(1 - q^6)*(1 + q^4)"),
            ([0, 1, 0, 0, 1, 0], "(1 - q^4)*(1 - q^6)*(1 - q^2 + q^10)"),
            ([2, 0, 0, 0, 0, 4], "q^11"),
            ([0, 2, 0, 0, 0, 2], "q^3*(1 - q^6)*(1 - q^4 - q^6 - 2*q^8 - q^10 - q^12)"),
            ([1, 0, 0, 0, 1, 1], "q^2*(1 - q^4)*(1 - q^6 + q^14)"),
            ([1, 0, 0, 1, 0, 2], "q^4*(1 + q^2 - 2*q^6 - q^8 - q^10 + q^14 + q^16 + q^18)"),
            ([1, 1, 0, 0, 0, 3], "q^6*(1 + q^2)*(1 - q^8 - q^12)"),
            ([0, 1, 0, 1, 0, 1], "q*(1 + q^2)*(1 - q^6)*(1 - q^2 - q^4 - q^6 + q^10 + q^12 + q^14)"),
        ];
        let inp = [1, 0, 0, 1, 0, 2];
        let blk = t.block(WeightVector::new(2, 4)).unwrap();
        assert_eq!(blk.dim(), 9);
        for out in &blk.basis {
            let got = t.entry(out, &inp).unwrap();
            let exp = want.iter().find(|w| &w.0 == out).map(|w| sc(w.1)).unwrap_or_else(Scalar::zero);
            assert_eq!(got, exp, "F^{out:?}");
        }
        let rep = check_intertwiner_props(&t);
        assert!(rep.passed(), "{:?}", rep.relation_failures);
    }
}

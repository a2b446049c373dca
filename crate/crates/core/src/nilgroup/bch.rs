//! Baker–Campbell–Hausdorff coefficients from Dynkin's formula.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::rational::Rational;

/// A word in the letters `X = 0`, `Y = 1`; it stands for the right-normed
/// bracket `[w₁,[w₂,[…,w_k]]]`.
pub type Word = Vec<u8>;

/// `log(exp X · exp Y) = Σ c_w [w]`, truncated at bracket length `class`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BchTable {
    pub class: usize,
    pub terms: Vec<(Word, Rational)>,
}

impl BchTable {
    pub fn coefficient(&self, w: &[u8]) -> Rational {
        self.terms.iter().find(|(v, _)| v == w).map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).map(Rational::from_int).product()
}

/// Dynkin's expansion: for `n ≥ 1` and pairs `(rᵢ, sᵢ)` with `rᵢ + sᵢ > 0`,
/// the word `X^{r₁}Y^{s₁}⋯X^{rₙ}Y^{sₙ}` with coefficient
/// `(−1)^{n−1} / (n · Σ(rᵢ+sᵢ) · Π rᵢ! sᵢ!)`.
pub fn dynkin_table(class: usize) -> BchTable {
    let mut acc: BTreeMap<Word, Rational> = BTreeMap::new();
    // Depth-first over sequences of pairs; state is (word, n, Π rᵢ!sᵢ!).
    fn go(class: usize, word: &mut Word, n: usize, denom: &Rational, acc: &mut BTreeMap<Word, Rational>) {
        if n > 0 {
            let k = word.len();
            // Right-normed brackets ending in a repeated letter vanish.
            let vanishes = k >= 2 && word[k - 1] == word[k - 2];
            if !vanishes {
                let sign = if n % 2 == 1 { Rational::one() } else { -Rational::one() };
                let mut c = sign / (Rational::from(n) * Rational::from(k) * denom);
                // Antisymmetry of the innermost bracket: […,[Y,X]] = −[…,[X,Y]].
                let mut key = word.clone();
                if k >= 2 && key[k - 2] == 1 {
                    key.swap(k - 2, k - 1);
                    c = -c;
                }
                *acc.entry(key).or_insert_with(Rational::zero) += &c;
            }
        }
        let room = class - word.len();
        for r in 0..=room {
            for s in 0..=room - r {
                if r + s == 0 {
                    continue;
                }
                let len = word.len();
                word.extend(std::iter::repeat_n(0u8, r));
                word.extend(std::iter::repeat_n(1u8, s));
                let d = denom * &(factorial(r) * factorial(s));
                go(class, word, n + 1, &d, acc);
                word.truncate(len);
            }
        }
    }
    go(class, &mut Vec::new(), 0, &Rational::one(), &mut acc);
    let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    BchTable { class, terms }
}

/// Tables are cached per class.
pub fn table(class: usize) -> Arc<BchTable> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<BchTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("cache lock");
    guard.entry(class).or_insert_with(|| Arc::new(dynkin_table(class))).clone()
}

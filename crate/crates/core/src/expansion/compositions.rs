/// A weak composition `(k_1, …, k_s)` of `q`: nonnegative parts summing to `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn new(parts: Vec<u32>) -> Self {
        Composition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// All weak compositions of `q` into `s` parts in ascending
    /// lexicographic order. `s = 0` yields nothing.
    pub fn all(q: u32, s: usize) -> Compositions {
        let first = (s > 0).then(|| {
            let mut v = vec![0; s];
            v[s - 1] = q;
            v
        });
        Compositions { next: first }
    }

    /// `C(q+s-1, s-1)`.
    pub fn count(q: u32, s: usize) -> u128 {
        if s == 0 {
            return 0;
        }
        let (n, k) = (q as u128 + s as u128 - 1, s as u128 - 1);
        let k = k.min(n - k);
        (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
    }
}

/// Iterator returned by [`Composition::all`].
#[derive(Debug, Clone)]
pub struct Compositions {
    next: Option<Vec<u32>>,
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let current = self.next.take()?;
        let s = current.len();
        // bump the rightmost position that still has mass behind it
        let mut succ = current.clone();
        let mut tail = 0u32;
        let mut found = false;
        for i in (0..s.saturating_sub(1)).rev() {
            tail += succ[i + 1];
            if tail > 0 {
                succ[i] += 1;
                for x in &mut succ[i + 1..] {
                    *x = 0;
                }
                succ[s - 1] = tail - 1;
                found = true;
                break;
            }
        }
        if found {
            self.next = Some(succ);
        }
        Some(Composition::new(current))
    }
}

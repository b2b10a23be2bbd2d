use std::fmt;

/// Canonical basis word of S(V): a multiset of basis indices sorted in
/// ascending index order. The empty word is the unit of S(V).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Self {
        Word(vec![i])
    }

    /// Wraps letters that are already sorted. Panics otherwise.
    pub fn from_sorted(letters: Vec<usize>) -> Self {
        assert!(letters.windows(2).all(|w| w[0] <= w[1]), "letters not sorted");
        Word(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self, degrees: &[i32]) -> i32 {
        self.0.iter().map(|&i| degrees[i]).sum()
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join("∨")
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

fn odd(d: i32) -> bool {
    d.rem_euclid(2) == 1
}

/// Koszul sign ε(σ) defined by x₁∨…∨xₙ = ε(σ)·x_{σ(1)}∨…∨x_{σ(n)}, where
/// `perm[a] = σ(a+1) − 1` and `degrees[i]` is the degree of x_{i+1}.
/// Returns `true` when the sign is −1.
pub fn koszul_sign(perm: &[usize], degrees: &[i32]) -> bool {
    let mut negative = false;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] && odd(degrees[perm[a]]) && odd(degrees[perm[b]]) {
                negative = !negative;
            }
        }
    }
    negative
}

/// Normalizes a product of letters (in the given order) to its canonical
/// word. Returns the sign (`true` = −1) or `None` if the product vanishes
/// because an odd letter repeats.
pub fn normalize(letters: &[usize], degrees: &[i32]) -> Option<(bool, Word)> {
    let mut negative = false;
    for a in 0..letters.len() {
        for b in a + 1..letters.len() {
            let (x, y) = (letters[a], letters[b]);
            if x == y && odd(degrees[x]) {
                return None;
            }
            if x > y && odd(degrees[x]) && odd(degrees[y]) {
                negative = !negative;
            }
        }
    }
    let mut sorted = letters.to_vec();
    sorted.sort_unstable();
    Some((negative, Word(sorted)))
}

/// Product of two canonical words.
pub fn multiply(a: &Word, b: &Word, degrees: &[i32]) -> Option<(bool, Word)> {
    let mut letters = a.0.clone();
    letters.extend_from_slice(&b.0);
    normalize(&letters, degrees)
}

/// All (p₁,…,p_k)-shuffles of n = Σpᵢ, as 0-based permutations `perm` with
/// `perm[a] = σ(a+1) − 1`, increasing on each block, in lexicographic order.
pub fn shuffles(blocks: &[usize]) -> Vec<Vec<usize>> {
    let n: usize = blocks.iter().sum();
    let mut out = Vec::new();
    // Assign each value 0..n to a block; values inside a block appear in
    // increasing order, which is exactly the shuffle condition.
    let mut assignment = vec![0usize; n];
    fn rec(v: usize, n: usize, blocks: &[usize], counts: &mut Vec<usize>, assignment: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if v == n {
            let mut perm = Vec::with_capacity(n);
            for (b, _) in blocks.iter().enumerate() {
                for (value, &blk) in assignment.iter().enumerate() {
                    if blk == b {
                        perm.push(value);
                    }
                }
            }
            out.push(perm);
            return;
        }
        for b in 0..blocks.len() {
            if counts[b] < blocks[b] {
                counts[b] += 1;
                assignment[v] = b;
                rec(v + 1, n, blocks, counts, assignment, out);
                counts[b] -= 1;
            }
        }
    }
    let mut counts = vec![0usize; blocks.len()];
    rec(0, n, blocks, &mut counts, &mut assignment, &mut out);
    out.sort();
    out
}

/// Canonical words of length exactly `m` (multisets without repeated odd
/// letters), in lexicographic order.
pub fn words_of_length(degrees: &[i32], m: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(start: usize, m: usize, degrees: &[i32], cur: &mut Vec<usize>, out: &mut Vec<Word>) {
        if cur.len() == m {
            out.push(Word(cur.clone()));
            return;
        }
        for i in start..degrees.len() {
            if cur.last() == Some(&i) && odd(degrees[i]) {
                continue;
            }
            cur.push(i);
            rec(i, m, degrees, cur, out);
            cur.pop();
        }
    }
    rec(0, m, degrees, &mut cur, &mut out);
    out
}

/// Nonempty canonical words of total degree at most `max_degree`. All
/// degrees must be positive, which makes the set finite.
pub fn words_up_to_degree(degrees: &[i32], max_degree: i32) -> Vec<Word> {
    assert!(degrees.iter().all(|&d| d > 0), "word enumeration by degree needs positive degrees");
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, budget: i32, degrees: &[i32], cur: &mut Vec<usize>, out: &mut Vec<Word>) {
        for i in start..degrees.len() {
            if degrees[i] > budget {
                continue;
            }
            if cur.last() == Some(&i) && odd(degrees[i]) {
                continue;
            }
            cur.push(i);
            out.push(Word(cur.clone()));
            rec(i, budget - degrees[i], degrees, cur, out);
            cur.pop();
        }
    }
    rec(0, max_degree, degrees, &mut cur, &mut out);
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

/// Set partitions of `0..m` into blocks (each block ascending, blocks
/// ordered by their smallest element).
pub fn set_partitions(m: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn rec(i: usize, m: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == m {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            rec(i + 1, m, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        rec(i + 1, m, blocks, out);
        blocks.pop();
    }
    rec(0, m, &mut blocks, &mut out);
    out
}

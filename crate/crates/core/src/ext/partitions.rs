//! Partitions and Littlewood–Richardson coefficients.
//!
//! A finite abelian p-group of type λ has a subgroup of type μ with quotient
//! of type ν exactly when c^λ_{μν} > 0, so realizability of an extension of
//! p-groups reduces to counting LR tableaux.

/// All partitions of `n`, each in weakly decreasing order, listed in reverse
/// lexicographic order starting from `[n]`.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(n, n, &mut current, &mut out);
    out
}

fn fill(remaining: u32, max: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    for part in (1..=remaining.min(max)).rev() {
        current.push(part);
        fill(remaining - part, part, current, out);
        current.pop();
    }
}

fn part(p: &[u32], i: usize) -> u32 {
    p.get(i).copied().unwrap_or(0)
}

fn contains(lambda: &[u32], mu: &[u32]) -> bool {
    (0..mu.len()).all(|i| part(lambda, i) >= mu[i])
}

/// c^λ_{μν}: the number of semistandard skew tableaux of shape λ/μ and
/// content ν whose reverse reading word is a lattice word.
pub fn lr_coefficient(lambda: &[u32], mu: &[u32], nu: &[u32]) -> u64 {
    let size = |p: &[u32]| p.iter().sum::<u32>();
    if size(lambda) != size(mu) + size(nu) || !contains(lambda, mu) || !contains(lambda, nu) {
        return 0;
    }
    let mut search = LrSearch::new(lambda, mu, nu);
    search.count(0)
}

/// True when c^λ_{μν} > 0, without counting every tableau.
pub fn lr_positive(lambda: &[u32], mu: &[u32], nu: &[u32]) -> bool {
    let size = |p: &[u32]| p.iter().sum::<u32>();
    if size(lambda) != size(mu) + size(nu) || !contains(lambda, mu) || !contains(lambda, nu) {
        return false;
    }
    let mut search = LrSearch::new(lambda, mu, nu);
    search.exists = true;
    search.count(0) > 0
}

struct LrSearch {
    // Skew cells in reverse reading order: rows top to bottom, right to left.
    cells: Vec<(usize, usize)>,
    mu: Vec<u32>,
    nu: Vec<u32>,
    filling: Vec<Vec<u32>>,
    used: Vec<u32>,
    exists: bool,
}

impl LrSearch {
    fn new(lambda: &[u32], mu: &[u32], nu: &[u32]) -> Self {
        let mut cells = Vec::new();
        for (r, &len) in lambda.iter().enumerate() {
            for c in (part(mu, r)..len).rev() {
                cells.push((r, c as usize));
            }
        }
        LrSearch {
            cells,
            mu: mu.to_vec(),
            nu: nu.to_vec(),
            filling: lambda.iter().map(|&l| vec![0; l as usize]).collect(),
            used: vec![0; nu.len()],
            exists: false,
        }
    }

    fn count(&mut self, idx: usize) -> u64 {
        if idx == self.cells.len() {
            return 1;
        }
        let (r, c) = self.cells[idx];
        // Rows weakly increase to the right; the cell to the right is already filled.
        let right = self.filling[r]
            .get(c + 1)
            .copied()
            .filter(|&v| v > 0)
            .unwrap_or(u32::MAX);
        // Columns strictly increase downward, unless the cell above lies in μ.
        let above = if r > 0 && (c as u32) >= part(&self.mu, r - 1) {
            self.filling[r - 1][c]
        } else {
            0
        };
        let mut total = 0;
        for v in (above + 1)..=(self.nu.len() as u32).min(right) {
            let i = (v - 1) as usize;
            if self.used[i] >= self.nu[i] {
                continue;
            }
            if i > 0 && self.used[i] + 1 > self.used[i - 1] {
                continue;
            }
            self.used[i] += 1;
            self.filling[r][c] = v;
            total += self.count(idx + 1);
            self.filling[r][c] = 0;
            self.used[i] -= 1;
            if self.exists && total > 0 {
                return total;
            }
        }
        total
    }
}

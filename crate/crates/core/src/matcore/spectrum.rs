use super::cmat::C64;

/// Optimal pairing of two spectra minimising the total distance (Hungarian
/// method). Returns `perm` with `a[i]` paired to `b[perm[i]]`.
pub fn match_spectra(a: &[C64], b: &[C64]) -> Vec<usize> {
    assert_eq!(a.len(), b.len(), "spectra of different size");
    let n = a.len();
    if n == 0 {
        return Vec::new();
    }
    let cost = |i: usize, j: usize| (a[i] - b[j]).norm();
    // potentials and matching in 1-based form
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut perm = vec![0; n];
    for j in 1..=n {
        perm[p[j] - 1] = j - 1;
    }
    perm
}

/// Largest distance between matched eigenvalues of two spectra.
pub fn spectral_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let perm = match_spectra(a, b);
    a.iter().zip(&perm).map(|(x, &j)| (x - b[j]).norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_permutation() {
        let a: Vec<C64> = (0..6).map(|k| C64::new(k as f64, (k * k) as f64 * 0.1)).collect();
        let b = vec![a[3], a[0], a[5], a[1], a[4], a[2]];
        assert_eq!(spectral_distance(&a, &b), 0.0);
        let perm = match_spectra(&a, &b);
        for (i, &j) in perm.iter().enumerate() {
            assert_eq!(a[i], b[j]);
        }
    }

    #[test]
    fn near_ties_are_paired_by_distance() {
        // lexicographic sorting pairs these crosswise
        let a = vec![C64::new(-1.0, 5.0), C64::new(-1.0 + 1e-12, -5.0)];
        let b = vec![C64::new(-1.0 + 1e-12, 5.0), C64::new(-1.0, -5.0)];
        assert!(spectral_distance(&a, &b) < 1e-11);
    }
}

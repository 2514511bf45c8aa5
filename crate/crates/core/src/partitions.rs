//! Integer partitions, listed with parts in nonincreasing order.

pub type Partition = Vec<u32>;

/// Partitions of `n` with every part at least `min_part`, in reverse
/// lexicographic order: `4, 31, 22, 211, 1111`.
pub fn partitions_min_part(n: u32, min_part: u32) -> Vec<Partition> {
    fn go(n: u32, max: u32, min: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (min..=max.min(n)).rev() {
            prefix.push(k);
            go(n - k, k, min, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, min_part.max(1), &mut Vec::new(), &mut out);
    out
}

pub fn partitions(n: u32) -> Vec<Partition> {
    partitions_min_part(n, 1)
}

/// `p(n)` by Euler's pentagonal recurrence.
pub fn partition_count(n: u32) -> u64 {
    let n = n as usize;
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut s = 0i64;
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            s += sign * p[m - g1];
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= m {
                s += sign * p[m - g2];
            }
        }
        p[m] = s;
    }
    p[n] as u64
}

/// Number of partitions of `n` into parts at least `min_part`, from the
/// product generating function.
pub fn partition_count_min_part(n: u32, min_part: u32) -> u64 {
    let n = n as usize;
    let mut c = vec![0u64; n + 1];
    c[0] = 1;
    for part in (min_part.max(1) as usize)..=n {
        for m in part..=n {
            c[m] += c[m - part];
        }
    }
    c[n]
}

pub fn level(p: &[u32]) -> u32 {
    p.iter().sum()
}

//! Dense polynomials over a prime field F_p.
//!
//! Coefficients are stored constant term first and kept trimmed, so the zero
//! polynomial is the empty vector.

pub(crate) type Poly = Vec<u32>;

pub(crate) fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn inv_mod_p(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    pow_mod_p(a, p - 2, p)
}

pub(crate) fn pow_mod_p(base: u32, mut exp: u32, p: u32) -> u32 {
    let p = p as u64;
    let mut base = base as u64 % p;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc as u32
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

/// Quotient and remainder of `a` by a nonzero `m`.
pub(crate) fn div_rem(a: &[u32], m: &[u32], p: u32) -> (Poly, Poly) {
    let m = trim(m.to_vec());
    assert!(!m.is_empty(), "polynomial division by zero");
    let mut rem = trim(a.to_vec());
    if rem.len() < m.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = inv_mod_p(*m.last().unwrap(), p) as u64;
    let p64 = p as u64;
    let mut quot = vec![0u32; rem.len() - m.len() + 1];
    while rem.len() >= m.len() {
        let shift = rem.len() - m.len();
        let c = (*rem.last().unwrap() as u64 * lead_inv % p64) as u32;
        quot[shift] = c;
        for (i, &mc) in m.iter().enumerate() {
            let t = (c as u64 * mc as u64 % p64) as u32;
            rem[shift + i] = (rem[shift + i] + p - t) % p;
        }
        rem = trim(rem);
    }
    (trim(quot), rem)
}

pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Poly {
    div_rem(a, m, p).1
}

pub(crate) fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Poly {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn make_monic(a: Poly, p: u32) -> Poly {
    match a.last() {
        None => a,
        Some(&lead) => {
            let inv = inv_mod_p(lead, p) as u64;
            a.into_iter()
                .map(|c| (c as u64 * inv % p as u64) as u32)
                .collect()
        }
    }
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(x, p)
}

/// Inverse of `a` modulo an irreducible `m` via the extended Euclidean algorithm.
pub(crate) fn inv_mod(a: &[u32], m: &[u32], p: u32) -> Option<Poly> {
    let (mut r0, mut r1) = (trim(m.to_vec()), rem(a, m, p));
    let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (quot, r2) = div_rem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&quot, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 is the gcd up to a unit.
    if r0.len() != 1 {
        return None;
    }
    let unit_inv = inv_mod_p(r0[0], p) as u64;
    let out = s0
        .into_iter()
        .map(|c| (c as u64 * unit_inv % p as u64) as u32)
        .collect();
    Some(rem(&trim(out), m, p))
}

/// Ben-Or irreducibility test: a degree-k polynomial is irreducible iff it
/// shares no factor with x^(p^i) - x for i = 1..=k/2.
pub(crate) fn is_irreducible(m: &[u32], p: u32) -> bool {
    let m = trim(m.to_vec());
    let k = m.len().saturating_sub(1);
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    let mut frob = x.clone();
    for _ in 1..=k / 2 {
        frob = pow_mod(&frob, p as u64, &m, p);
        let g = gcd(&m, &sub(&frob, &x, p), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

pub(crate) fn pow_mod(base: &[u32], mut exp: u64, m: &[u32], p: u32) -> Poly {
    let mut acc: Poly = vec![1];
    let mut base = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &base, m, p);
        }
        base = mul_mod(&base, &base, m, p);
        exp >>= 1;
    }
    rem(&acc, m, p)
}

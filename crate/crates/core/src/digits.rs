//! Little-endian base-p digit vectors interpreted modulo p^len.
//!
//! Every function here assumes its inputs share one length and returns a
//! vector of that same length; anything carried past the top digit is
//! dropped, which is exactly reduction modulo p^len.

#[inline]
fn divmod(value: u128, p: u32) -> (u128, u32) {
    if value <= u64::MAX as u128 {
        let v = value as u64;
        let p = p as u64;
        ((v / p) as u128, (v % p) as u32)
    } else {
        let p = p as u128;
        (value / p, (value % p) as u32)
    }
}

/// Digits of `n mod p^len`, negative `n` included.
pub(crate) fn from_int(n: i128, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    let mut m = n.unsigned_abs();
    for d in out.iter_mut() {
        if m == 0 {
            break;
        }
        let (q, r) = divmod(m, p);
        *d = r;
        m = q;
    }
    if n < 0 {
        neg_assign(&mut out, p);
    }
    out
}

pub(crate) fn add(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    debug_assert_eq!(a.len(), b.len());
    let mut out = Vec::with_capacity(a.len());
    let mut carry = 0u64;
    for (&x, &y) in a.iter().zip(b) {
        let s = x as u64 + y as u64 + carry;
        if s >= p as u64 {
            out.push((s - p as u64) as u32);
            carry = 1;
        } else {
            out.push(s as u32);
            carry = 0;
        }
    }
    out
}

pub(crate) fn neg_assign(a: &mut [u32], p: u32) {
    // -a = (p^len - 1 - a) + 1
    let mut carry = 1u64;
    for d in a.iter_mut() {
        let s = (p - 1 - *d) as u64 + carry;
        if s >= p as u64 {
            *d = (s - p as u64) as u32;
            carry = 1;
        } else {
            *d = s as u32;
            carry = 0;
        }
    }
}

pub(crate) fn neg(a: &[u32], p: u32) -> Vec<u32> {
    let mut out = a.to_vec();
    neg_assign(&mut out, p);
    out
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    add(a, &neg(b, p), p)
}

/// Product modulo p^len (only the low `len` columns are formed).
pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    debug_assert_eq!(a.len(), b.len());
    let len = a.len();
    let mut out = vec![0u32; len];
    if p < (1 << 16) && len < (1 << 24) {
        // column sums stay below len * p^2 + carry < 2^64
        let p = p as u64;
        let mut carry = 0u64;
        for k in 0..len {
            let col = a[..=k].iter().zip(b[..=k].iter().rev()).fold(carry, |acc, (&x, &y)| acc + x as u64 * y as u64);
            out[k] = (col % p) as u32;
            carry = col / p;
        }
        return out;
    }
    let mut carry: u128 = 0;
    for k in 0..len {
        let mut col = carry;
        for i in 0..=k {
            let x = a[i];
            if x != 0 {
                col += (x as u64 * b[k - i] as u64) as u128;
            }
        }
        let (q, r) = divmod(col, p);
        out[k] = r;
        carry = q;
    }
    out
}

#[cfg(test)]
/// Multiply by a small non-negative integer modulo p^len.
pub(crate) fn mul_small(a: &[u32], m: u64, p: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len());
    let mut carry: u128 = 0;
    for &x in a {
        let (q, r) = divmod(x as u128 * m as u128 + carry, p);
        out.push(r);
        carry = q;
    }
    out
}

/// Inverse of `d` modulo `p`, for `d` not divisible by `p`.
pub(crate) fn inv_mod_p(d: u64, p: u32) -> u64 {
    let (mut old_r, mut r) = (d as i128 % p as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "{d} is not invertible mod {p}");
    old_s.rem_euclid(p as i128) as u64
}

/// Exact quotient `a / m` modulo p^len for a small `m` coprime to `p`.
pub(crate) fn div_small(a: &[u32], m: u64, p: u32) -> Vec<u32> {
    debug_assert!(!m.is_multiple_of(p as u64));
    let m_inv = inv_mod_p(m, p) as i128;
    let (pi, mi) = (p as i128, m as i128);
    let mut out = Vec::with_capacity(a.len());
    // borrow is the amount still owed at the current position
    let mut borrow: i128 = 0;
    for &x in a {
        let t = x as i128 - borrow;
        let q = (t.rem_euclid(pi) * m_inv) % pi;
        out.push(q as u32);
        borrow = (q * mi - t) / pi;
    }
    out
}

/// Inverse of a unit (`a[0] != 0`) modulo p^len by Newton's iteration
/// `z <- z (2 - a z)`, which doubles the number of correct digits per step.
pub(crate) fn inverse(a: &[u32], p: u32) -> Vec<u32> {
    let len = a.len();
    debug_assert!(len > 0 && a[0] != 0);
    let mut z = vec![0u32; len];
    z[0] = inv_mod_p(a[0] as u64, p) as u32;
    let mut correct = 1usize;
    let two = from_int(2, p, len);
    while correct < len {
        correct = (2 * correct).min(len);
        let az = mul(&a[..correct], &z[..correct], p);
        let step = sub(&two[..correct], &az, p);
        let next = mul(&z[..correct], &step, p);
        z[..correct].copy_from_slice(&next);
    }
    z
}

/// Number of low-order zero digits.
pub(crate) fn low_zeros(a: &[u32]) -> usize {
    a.iter().take_while(|&&d| d == 0).count()
}

//! Exact arithmetic in Q(i, √2): every scalar is a + b·i + c·√2 + d·i√2.

use qweb::{Rational, Scalar};

fn main() {
    let i = Scalar::i();
    let r2 = Scalar::sqrt2();
    let x = &(&Scalar::from_int(1) + &i) * &Scalar::inv_sqrt2();
    println!("x = (1 + i)/√2 = {x}");
    println!("x^2 = {}", &x * &x);
    println!("x^8 = {}", (0..8).fold(Scalar::one(), |acc, _| &acc * &x));

    let y = &Scalar::from_int(3) - &(&r2 * &i);
    let y_inv = y.inv().expect("nonzero");
    println!("y = {y}, 1/y = {y_inv}, y/y = {}", &y * &y_inv);

    // Components stay exact rationals; the big representation only kicks in on overflow.
    let big = Scalar::from_rational(Rational::new(i64::MAX, 3));
    println!("(2^63 - 1)/3 squared = {}", &big * &big);
}

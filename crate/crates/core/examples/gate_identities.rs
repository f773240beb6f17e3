//! Checks the single-qubit identities the key updates rely on.

use inqc::qsim::matrix::Matrix;
use inqc::qsim::GateKind;

fn main() {
    let x = Matrix::single(GateKind::X);
    let z = Matrix::single(GateKind::Z);
    let p = Matrix::single(GateKind::P);
    let t = Matrix::single(GateKind::T);
    let tol = 1e-12;

    let checks = [
        ("P^2 = Z", p.pow(2).equal_up_to_phase(&z, tol)),
        ("T^2 = P", t.pow(2).equal_up_to_phase(&p, tol)),
        ("T^8 = I", t.pow(8).approx_eq(&Matrix::identity(2), tol)),
        (
            "TX = PXT",
            (&t * &x).equal_up_to_phase(&(&(&p * &x) * &t), tol),
        ),
        ("TZ = ZT", (&t * &z).equal_up_to_phase(&(&z * &t), tol)),
        (
            "PX = XZP",
            (&p * &x).equal_up_to_phase(&(&(&x * &z) * &p), tol),
        ),
    ];
    for (name, ok) in checks {
        println!("{name:<10} {}", if ok { "holds" } else { "FAILS" });
    }

    // P^{a xor b} = Z^{ab} P^{a+b}: the cross term that the nonlocal box has to split.
    for a in 0..2u32 {
        for b in 0..2u32 {
            let lhs = p.pow(a ^ b);
            let rhs = &z.pow(a & b) * &p.pow(a + b);
            println!(
                "a={a} b={b}  P^(a^b) = Z^(ab) P^(a+b): {}",
                lhs.equal_up_to_phase(&rhs, tol)
            );
        }
    }
}

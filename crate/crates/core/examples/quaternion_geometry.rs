//! Builds a double rotation from two unit quaternions and splits it back into
//! its invariant planes.

use std::f64::consts::PI;

use isoclinic::quat4::{cayley_rotation, decompose_rotation, left_isoclinic, quat_exp, Quaternion};

fn main() -> isoclinic::Result<()> {
    let u = Quaternion::unit(0.0, 1.0, 0.0, 0.0)?;
    let v = Quaternion::unit(0.0, 0.0, 0.6, 0.8)?;
    let q = quat_exp(u, PI / 5.0)?;
    let p = quat_exp(v, PI / 9.0)?;

    let r = cayley_rotation(q, p)?;
    println!("R = M_L(q) M_R(p):{r:.6}");

    let d = decompose_rotation(q, p)?;
    println!("kind {:?}", d.kind);
    println!("plane 1 turns by {:.6} rad (expected {:.6})", d.angle1, PI / 5.0 + PI / 9.0);
    println!("plane 2 turns by {:.6} rad (expected {:.6})", d.angle2, PI / 5.0 - PI / 9.0);

    let l = left_isoclinic(q)?;
    for c in [[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], [0.5, 0.5, 0.5, 0.5]] {
        let c = nalgebra::Vector4::from(c);
        println!("left isoclinic angle for {:?}: {:.6}", c.as_slice(), c.dot(&(l * c)).acos());
    }
    Ok(())
}

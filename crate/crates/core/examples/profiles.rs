//! Built-in profiles, the expression language and the admissibility check.

use kaehler_sl2c::profiles::{resolve_profile, validate_kahler, BUILTIN_SPECS};

fn main() {
    println!("built-ins: {}", BUILTIN_SPECS.join(", "));
    for spec in ["lump", "stenzel:c=3", "y^2 + cosh(y)", "y^2 + log(cosh(y))", "y^3", "-y^2"] {
        let p = resolve_profile(spec).expect("parses");
        let v = validate_kahler(&p, 10.0, 200);
        let d = p.derivatives(1.0).unwrap();
        println!("{spec:>18}: f(1) = {:.6}, f'(1) = {:.6}, f''(1) = {:.6}, usable = {}", d[0], d[1], d[2], v.usable());
        for f in &v.failures {
            println!("{:>20}{f}", "");
        }
    }
}

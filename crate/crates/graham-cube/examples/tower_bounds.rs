//! Up-arrow bound arithmetic: the Shelah recursion, the Hales-Jewett step
//! chain that turns a dimension-6 seed into 2^^(2^^(2^^9)), its comparison
//! against 2^^^6, and the n(k) recursion for the lower-bound construction.

use graham_cube::bounds::{
    compare, hj_chain, nk_bound, parse_expr, shelah_f_bound, shelah_f_exact, Comparison, TowerExpr,
};

fn main() -> graham_cube::Result<()> {
    println!("Shelah recursion f(l,k) = k^(f(l-1,k)^(2(l-1))) + 1:");
    for k in 2..=5 {
        println!("  f(1,{k}) = {}", shelah_f_exact(1, k)?);
    }
    println!("  f(2,2) = {}", shelah_f_exact(2, 2)?);
    println!("  f(2,3) = {}", shelah_f_exact(2, 3)?);
    println!("  f(2,5) <= {}", shelah_f_bound(2, 5)?);

    let (result, trace) = hj_chain(&TowerExpr::nat(6))?;
    println!("\nHales-Jewett chain from dimension 6:");
    println!("{}", trace.render().trim_end());
    let triarrow = parse_expr("2^^^6")?;
    println!(
        "result: {result}, compare({result}, 2^^^6) = {:?}",
        compare(&result, &triarrow)
    );
    assert_eq!(compare(&result, &triarrow), Comparison::Lt);

    let (result18, trace18) = hj_chain(&TowerExpr::tower(2, 18))?;
    println!("\nHales-Jewett chain from dimension 2^^18:");
    println!("{}", trace18.render().trim_end());
    println!("result: {result18}");

    println!("\nn(k) recursion:");
    for k in 1..=7 {
        let (bound, _) = nk_bound(k)?;
        println!("  n({k}) = {bound}");
    }
    Ok(())
}

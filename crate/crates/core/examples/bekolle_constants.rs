//! Békollé constants of catalog weights over dyadic and centered box families.

use bergman_lab::{bekolle_constant, AlphaMeasure, BoxFamily, Exponents, GridWindow, QuadratureSpec, Weight};

fn main() -> bergman_lab::Result<()> {
    let q = QuadratureSpec::default();
    let window = GridWindow::new(-3, 3, -8.0, 8.0)?;
    let fam = BoxFamily::dyadic(&window)?.union(&BoxFamily::centered_ladder(-3, 3)?);
    let centered = BoxFamily::centered_ladder(-3, 3)?;

    let step = Weight::parse("step:a=1,b=4")?;
    let e2 = Exponents::new(2.0)?;
    let mu0 = AlphaMeasure::new(0.0)?;
    let b = bekolle_constant(&step, &e2, &mu0, &centered, &q)?;
    println!("{step}: B_2 over centered boxes = {} (25/16 = {})", b.value, 25.0 / 16.0);

    for spec in ["constant:c=3", "power:gamma=0.5", "power:gamma=-0.8", "step:a=1,b=9"] {
        let w = Weight::parse(spec)?;
        for p in [1.5, 2.0, 3.0] {
            for alpha in [0.0, 1.0] {
                let b = bekolle_constant(&w, &Exponents::new(p)?, &AlphaMeasure::new(alpha)?, &fam, &q)?;
                println!("{spec:>18}  p={p}  alpha={alpha}  B={:.6}  worst box [{:.4}, {:.4})",
                    b.value, b.worst_box.left, b.worst_box.right());
            }
        }
    }
    Ok(())
}

//! Writing and reading tile functions, and using a table as a weight.

use std::io::BufReader;

use bergman_lab::{
    bekolle_constant, AlphaMeasure, BoxFamily, Exponents, GridWindow, QuadratureSpec, Shift, TileFunction, TileGrid,
    Weight,
};

fn main() -> bergman_lab::Result<()> {
    let window = GridWindow::new(-2, 1, -2.0, 2.0)?;
    let grid = TileGrid::new(Shift::Third, window)?;
    let f = TileFunction::from_fn(grid, |d| 1.0 + (d.left() + d.j as f64).abs());

    let mut buf = Vec::new();
    f.write_to(&mut buf)?;
    let text = String::from_utf8(buf).expect("utf-8");
    println!("{}", text.lines().take(5).collect::<Vec<_>>().join("\n"));
    let back = TileFunction::read_from(BufReader::new(text.as_bytes()))?;
    println!("round trip exact: {}", back.values().eq(f.values()));

    let dir = std::env::temp_dir().join("bergman_lab_table.txt");
    f.write_table(std::fs::File::create(&dir)?)?;
    let w = Weight::parse(&format!("table:path={}", dir.display()))?;
    let b = bekolle_constant(
        &w,
        &Exponents::new(2.0)?,
        &AlphaMeasure::new(0.0)?,
        &BoxFamily::dyadic(&window)?,
        &QuadratureSpec::default(),
    )?;
    println!("table weight B_2 over the dyadic family: {:.6}", b.value);
    Ok(())
}

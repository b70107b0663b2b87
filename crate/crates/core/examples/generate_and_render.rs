//! Generate an instance, write it in the text format, solve it and render
//! the tour as SVG into the system temp directory.

use std::error::Error;

use turncover::approx::approx_tour;
use turncover::generate::{gen_instance, GenKind, GenParams};
use turncover::io::{parse_instance, write_instance, Instance};
use turncover::svg::render_svg;

fn main() -> Result<(), Box<dyn Error>> {
    let inst = gen_instance(GenKind::RandomPolyomino, &GenParams { pixels: 25, scale: 6, ..GenParams::default() }, 7)?;
    let text = write_instance(&Instance::Grid(inst.clone()));
    println!("{}", text.lines().next().unwrap_or(""));
    // Parsing the written text gives back the same instance.
    let Instance::Grid(again) = parse_instance(&text)? else { unreachable!() };
    assert_eq!(again.pixels(), inst.pixels());

    let tour = approx_tour(&inst)?;
    let svg = render_svg(&inst, &tour.cover);
    let path = std::env::temp_dir().join("turncover-tour.svg");
    std::fs::write(&path, &svg)?;
    println!("tour with {} turns written to {} ({} bytes)", tour.cost.turns, path.display(), svg.len());
    Ok(())
}

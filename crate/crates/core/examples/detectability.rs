use subpen::code::builtin::{builtin_412, builtin_832};
use subpen::code::is_detectable;
use subpen::{Letter, PauliOperator};

fn main() -> subpen::Result<()> {
    for code in [builtin_412(), builtin_832()] {
        let n = code.num_physical();
        println!("{} {}", code.name(), code.params());
        for q in 0..n {
            let row: Vec<String> = [Letter::X, Letter::Y, Letter::Z]
                .iter()
                .map(|&l| {
                    let r = is_detectable(&code, &PauliOperator::single(n, q, l), 1e-9).unwrap();
                    format!("{}{}:{:?}", l.as_char(), q + 1, r.mode)
                })
                .collect();
            println!("  {}", row.join("  "));
        }
        for g in code.gauge_generators() {
            println!("  gauge {} -> {:?}", g.to_sparse_string(), is_detectable(&code, g, 1e-9)?.mode);
        }
        for l in code.bare_logicals() {
            let r = is_detectable(&code, &l, 1e-9)?;
            println!("  logical {} -> detectable={}", l.to_sparse_string(), r.detectable);
        }
    }
    Ok(())
}

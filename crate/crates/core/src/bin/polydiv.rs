use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let result = polydiv::cli::run(&args, &mut std::io::stdin().lock());
    std::io::stdout().write_all(result.stdout.as_bytes()).expect("stdout");
    std::io::stderr().write_all(result.stderr.as_bytes()).expect("stderr");
    std::process::exit(result.exit);
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let (code, out) = latcrit::cli::run(&args);
    if code == 2 {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    std::process::exit(code);
}

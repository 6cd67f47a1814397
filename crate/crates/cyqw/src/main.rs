use std::process::exit;

fn main() {
    exit(cyqw::cli::run(std::env::args().skip(1)));
}

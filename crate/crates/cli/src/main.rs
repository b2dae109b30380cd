fn main() {
    std::process::exit(besov::run(std::env::args_os()));
}

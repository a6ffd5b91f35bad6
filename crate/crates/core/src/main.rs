fn main() {
    std::process::exit(lens_scatter::cli::main_with_args(std::env::args_os()));
}

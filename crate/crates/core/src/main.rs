fn main() {
    std::process::exit(unipotent_diameter::cli::main_with_args(std::env::args_os()));
}

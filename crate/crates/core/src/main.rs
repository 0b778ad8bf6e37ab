fn main() {
    std::process::exit(cube_faultlab::cli::main());
}

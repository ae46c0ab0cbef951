fn main() {
    std::process::exit(phonon_blockade::run());
}

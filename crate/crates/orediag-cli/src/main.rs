fn main() {
    println!("orediag");
}

fn main() {
    println!("reltri");
}

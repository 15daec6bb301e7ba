pub mod logcodecs;
pub mod logmodel;
pub mod tokenizer;
pub mod source;
pub mod skeleton;
pub mod density;

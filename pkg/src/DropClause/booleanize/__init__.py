"""Booleanization: images to thresholded bits, text to bag-of-words, dataset I/O."""

from .cache import CACHE_MAGIC, load_binarized, save_binarized
from .exceptions import BooleanizeError, DatasetFormatError, EmptyInputError
from .loaders import load_bits_csv, load_idx, load_text_csv, read_idx, write_idx
from .models import BinarizationConfig, ImageDataset, TextDataset, Vocabulary
from .synthetic import noisy_xor, pattern_xor_images, random_binary, xor_dataset
from .text import DEFAULT_VOCAB_SIZE, build_vocab, text_to_bow, texts_to_matrix, tokenize
from .thresholding import adaptive_gaussian_threshold, binarize_images, gaussian_kernel

__all__ = [
    "BinarizationConfig",
    "BooleanizeError",
    "CACHE_MAGIC",
    "DEFAULT_VOCAB_SIZE",
    "DatasetFormatError",
    "EmptyInputError",
    "ImageDataset",
    "TextDataset",
    "Vocabulary",
    "adaptive_gaussian_threshold",
    "binarize_images",
    "build_vocab",
    "gaussian_kernel",
    "load_binarized",
    "load_bits_csv",
    "load_idx",
    "load_text_csv",
    "noisy_xor",
    "pattern_xor_images",
    "random_binary",
    "read_idx",
    "save_binarized",
    "text_to_bow",
    "texts_to_matrix",
    "tokenize",
    "write_idx",
]

#pragma once

#include <cstddef>
#include <filesystem>

#include "latentscope/latent_matrix.hpp"

namespace latentscope {

enum class FormatKind {
  Npy,        // .npy v1.0 subset: little-endian '<f4'/'<f8', C order, 1-D or 2-D
  RawBinary,  // headerless little-endian reals; dims and width supplied out of band
  Csv,        // UTF-8, comma separated, LF or CRLF, optional single header row
};

enum class ElementWidth { F32, F64 };

struct EmbeddingFormat {
  FormatKind kind = FormatKind::Npy;
  // Stored element width. Ignored when loading npy (the header declares it).
  ElementWidth width = ElementWidth::F64;
  // Row width for raw-binary loads; unused otherwise.
  std::size_t raw_dims = 0;
};

// Parses "npy" / "raw" / "csv"; throws ConfigError on anything else.
FormatKind parse_format_kind(const std::string& name);

// Loads and validates a latent matrix. 1-D inputs become a single-row
// matrix. Values are widened to double regardless of the stored width.
// Throws FormatError for malformed files (naming the byte offset where
// applicable), ValidationError for non-finite payloads (naming the row),
// and IoError when the file cannot be read.
LatentMatrix load_embeddings(const std::filesystem::path& path, const EmbeddingFormat& format);

// Writes `matrix` at the stored element width. Loading the result back
// reproduces the matrix bit-exactly at that width.
void save_embeddings(const LatentMatrix& matrix, const std::filesystem::path& path,
                     const EmbeddingFormat& format);

}  // namespace latentscope

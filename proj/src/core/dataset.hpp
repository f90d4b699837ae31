#pragma once

#include <armadillo>
#include <string>
#include <vector>

namespace bsur {

// Immutable after loading; shared read-only across chains.
struct Dataset {
    arma::mat Y;    // n x s responses
    arma::mat X;    // n x p predictors under selection
    arma::mat X0;   // n x p0 mandatory predictors (p0 may be 0)
    std::vector<std::string> y_names, x_names, x0_names;

    arma::uword n() const { return Y.n_rows; }
    arma::uword s() const { return Y.n_cols; }
    arma::uword p() const { return X.n_cols; }
    arma::uword p0() const { return X0.n_cols; }

    void validate() const;  // throws ConfigError on NaN/Inf, row mismatch, duplicate names
};

// Numeric matrix with one header row, comma or tab separated.
struct NamedMatrix {
    arma::mat values;
    std::vector<std::string> names;
};

NamedMatrix read_csv_matrix(const std::string& path);
void write_csv_matrix(const std::string& path, const arma::mat& m,
                      const std::vector<std::string>& names);

// 1-based inclusive column blocks, e.g. "1:10" or "1,3,5:8". Returns 0-based indices.
std::vector<arma::uword> parse_column_block(const std::string& text);

// Split one combined matrix into [Y, X, X0] by column blocks. The blocks must
// partition a subset of the columns without overlap; x0 may be empty.
Dataset load_dataset_combined(const std::string& path,
                              const std::vector<arma::uword>& y_cols,
                              const std::vector<arma::uword>& x_cols,
                              const std::vector<arma::uword>& x0_cols);

// Separate files; x0_path may be empty.
Dataset load_dataset_files(const std::string& y_path, const std::string& x_path,
                           const std::string& x0_path);

// Write the combined [Y, X, X0] matrix; load_dataset_combined round-trips it.
void write_dataset(const std::string& path, const Dataset& data);

// Short content fingerprint (FNV-1a over the formatted bytes).
std::string dataset_fingerprint(const Dataset& data);

}  // namespace bsur

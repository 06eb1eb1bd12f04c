#include "miri/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "miri/errors.hpp"

namespace miri {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

bool parse_double(const std::string& field, double& out) {
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::string cell_name(std::size_t line_no, std::size_t col) {
    return "row " + std::to_string(line_no) + ", column " + std::to_string(col + 1);
}

void format_double(char* buf, std::size_t cap, double v) {
    std::snprintf(buf, cap, "%.17g", v);
}

}  // namespace

std::size_t MaskedDataset::observed_count() const {
    std::size_t n = 0;
    for (double m : mask.storage()) n += (m == 1.0);
    return n;
}

void MaskedDataset::validate() const {
    if (raw.rows() == 0 || raw.cols() == 0) throw ParseError("dataset is empty");
    if (!raw.same_shape(mask)) throw ShapeError("dataset: raw and mask shapes differ");
    if (!feature_names.empty() && feature_names.size() != raw.cols())
        throw ShapeError("dataset: feature name count does not match column count");
    for (std::size_t i = 0; i < raw.rows(); ++i) {
        for (std::size_t j = 0; j < raw.cols(); ++j) {
            const double m = mask(i, j);
            if (m != 0.0 && m != 1.0)
                throw ParseError("dataset: mask entry at " + cell_name(i + 1, j) + " is not 0/1");
            if (m == 1.0 && !std::isfinite(raw(i, j)))
                throw ParseError("dataset: observed cell at " + cell_name(i + 1, j) +
                                 " is not finite");
        }
    }
}

MaskedDataset load_csv(const std::string& path, const std::string& missing_token) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");

    std::vector<std::string> names;
    std::vector<double> values;
    std::vector<double> mask;
    std::size_t cols = 0, rows = 0, line_no = 0;
    bool saw_data = false;
    std::string line;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto fields = split_fields(stripped);

        if (!saw_data) {
            // Header row: every field non-numeric and not a missing marker.
            bool all_names = true;
            for (const auto& f : fields) {
                double tmp;
                if (f.empty() || f == missing_token || parse_double(f, tmp)) {
                    all_names = false;
                    break;
                }
            }
            if (all_names) {
                names = fields;
                cols = fields.size();
                continue;
            }
        }

        if (cols == 0) cols = fields.size();
        if (fields.size() != cols)
            throw ParseError("'" + path + "': row " + std::to_string(line_no) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(cols));
        for (std::size_t j = 0; j < fields.size(); ++j) {
            const std::string& f = fields[j];
            if (f.empty() || f == missing_token) {
                values.push_back(kNaN);
                mask.push_back(0.0);
                continue;
            }
            double v;
            if (!parse_double(f, v) || !std::isfinite(v))
                throw ParseError("'" + path + "': cannot parse '" + f + "' at " +
                                 cell_name(line_no, j));
            values.push_back(v);
            mask.push_back(1.0);
        }
        saw_data = true;
        ++rows;
    }
    if (!saw_data) throw ParseError("'" + path + "': no data rows");

    MaskedDataset ds;
    ds.raw = Matrix(rows, cols);
    ds.mask = Matrix(rows, cols);
    ds.raw.storage() = std::move(values);
    ds.mask.storage() = std::move(mask);
    ds.feature_names = std::move(names);
    ds.validate();
    return ds;
}

namespace {

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        out << content;
        if (!out) throw IoError("write failed for '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
    }
}

}  // namespace

void write_csv(const std::string& path, const Matrix& values, const Matrix* mask,
               const std::vector<std::string>& feature_names, const std::string& header_comment,
               const std::string& missing_token) {
    if (mask && !values.same_shape(*mask)) throw ShapeError("write_csv: mask shape mismatch");
    std::ostringstream out;
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    if (!feature_names.empty()) {
        for (std::size_t j = 0; j < feature_names.size(); ++j)
            out << (j ? "," : "") << feature_names[j];
        out << "\n";
    }
    char buf[64];
    for (std::size_t i = 0; i < values.rows(); ++i) {
        for (std::size_t j = 0; j < values.cols(); ++j) {
            if (j) out << ',';
            if (mask && (*mask)(i, j) == 0.0) {
                out << missing_token;
            } else {
                format_double(buf, sizeof buf, values(i, j));
                out << buf;
            }
        }
        out << "\n";
    }
    atomic_write(path, out.str());
}

void write_mask_csv(const std::string& path, const Matrix& mask,
                    const std::vector<std::string>& feature_names,
                    const std::string& header_comment) {
    std::ostringstream out;
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    if (!feature_names.empty()) {
        for (std::size_t j = 0; j < feature_names.size(); ++j)
            out << (j ? "," : "") << feature_names[j];
        out << "\n";
    }
    for (std::size_t i = 0; i < mask.rows(); ++i) {
        for (std::size_t j = 0; j < mask.cols(); ++j) {
            if (j) out << ',';
            out << (mask(i, j) == 1.0 ? '1' : '0');
        }
        out << "\n";
    }
    atomic_write(path, out.str());
}

Matrix Standardizer::transform(const Matrix& x) const {
    if (x.cols() != mean.size()) throw ShapeError("standardizer: column count mismatch");
    Matrix out = x;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        double* row = out.row(i);
        for (std::size_t j = 0; j < out.cols(); ++j) row[j] = (row[j] - mean[j]) / stddev[j];
    }
    return out;
}

Matrix Standardizer::inverse(const Matrix& x) const {
    if (x.cols() != mean.size()) throw ShapeError("standardizer: column count mismatch");
    Matrix out = x;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        double* row = out.row(i);
        for (std::size_t j = 0; j < out.cols(); ++j) row[j] = row[j] * stddev[j] + mean[j];
    }
    return out;
}

std::pair<MaskedDataset, Standardizer> standardize(const MaskedDataset& ds) {
    ds.validate();
    const std::size_t n = ds.n_rows(), d = ds.n_cols();
    Standardizer st;
    st.mean.resize(d);
    st.stddev.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (ds.mask(i, j) == 1.0) {
                sum += ds.raw(i, j);
                ++count;
            }
        }
        const std::string fname = ds.feature_names.empty()
                                      ? "feature " + std::to_string(j + 1)
                                      : "feature '" + ds.feature_names[j] + "'";
        if (count < 2)
            throw PreprocessError(fname + " has fewer than 2 observed entries");
        const double mean = sum / static_cast<double>(count);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (ds.mask(i, j) == 1.0) {
                const double dlt = ds.raw(i, j) - mean;
                ss += dlt * dlt;
            }
        }
        const double var = ss / static_cast<double>(count);
        if (!(var > 0.0))
            throw PreprocessError(fname + " is constant over observed entries");
        st.mean[j] = mean;
        st.stddev[j] = std::sqrt(var);
    }

    MaskedDataset out = ds;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (out.mask(i, j) == 1.0)
                out.raw(i, j) = st.transform_cell(out.raw(i, j), j);
            else
                out.raw(i, j) = kNaN;
        }
    }
    return {std::move(out), std::move(st)};
}

bool pinning_holds(const ImputationState& state) {
    if (!state.x.same_shape(state.mask) || !state.x.same_shape(state.pinned)) return false;
    for (std::size_t idx = 0; idx < state.x.size(); ++idx) {
        if (state.mask.data()[idx] == 1.0 && state.x.data()[idx] != state.pinned.data()[idx])
            return false;
    }
    return true;
}

InitStrategy parse_init_strategy(const std::string& name) {
    if (name == "normal") return InitStrategy::Normal;
    if (name == "uniform") return InitStrategy::Uniform;
    if (name == "mean") return InitStrategy::Mean;
    throw ConfigError("unknown init strategy '" + name + "' (expected normal|uniform|mean)");
}

std::string to_string(InitStrategy s) {
    switch (s) {
        case InitStrategy::Normal: return "normal";
        case InitStrategy::Uniform: return "uniform";
        case InitStrategy::Mean: return "mean";
    }
    return "?";
}

ImputationState initial_impute(const MaskedDataset& ds, InitStrategy strategy, Rng& rng) {
    ds.validate();
    const std::size_t n = ds.n_rows(), d = ds.n_cols();

    std::vector<double> fill_mean(d, 0.0);
    if (strategy == InitStrategy::Mean) {
        for (std::size_t j = 0; j < d; ++j) {
            double sum = 0.0;
            std::size_t count = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (ds.mask(i, j) == 1.0) {
                    sum += ds.raw(i, j);
                    ++count;
                }
            }
            fill_mean[j] = count ? sum / static_cast<double>(count) : 0.0;
        }
    }

    ImputationState state;
    state.mask = ds.mask;
    state.x = Matrix(n, d);
    state.pinned = Matrix(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (ds.mask(i, j) == 1.0) {
                state.x(i, j) = ds.raw(i, j);
                state.pinned(i, j) = ds.raw(i, j);
            } else {
                switch (strategy) {
                    case InitStrategy::Normal: state.x(i, j) = rng.normal(); break;
                    case InitStrategy::Uniform: state.x(i, j) = rng.uniform(); break;
                    case InitStrategy::Mean: state.x(i, j) = fill_mean[j]; break;
                }
            }
        }
    }
    state.iteration = 0;
    return state;
}

}  // namespace miri

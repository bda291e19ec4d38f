#include "pdcp/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string_view>

namespace pdcp {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_cells(std::string_view line, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

bool parse_double(std::string_view cell, double& value) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    return ec == std::errc() && ptr == end && !cell.empty();
}

bool is_missing(std::string_view cell) { return cell.empty() || cell == "NA"; }

}  // namespace

ObservationMatrix parse_matrix_csv(std::istream& in, const std::string& name) {
    ObservationMatrix out;
    std::string line;
    std::vector<std::string_view> cells;
    std::size_t line_no = 0;
    bool header_checked = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        split_cells(line, cells);

        if (!header_checked) {
            header_checked = true;
            bool numeric = true;
            double v;
            for (auto cell : cells)
                if (!parse_double(cell, v)) numeric = false;
            if (!numeric) continue;  // header row
        }

        if (out.d == 0) out.d = cells.size();
        if (cells.size() != out.d)
            throw std::runtime_error(name + ": ragged row at line " + std::to_string(line_no) + " (" +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(out.d) + ")");
        for (std::size_t k = 0; k < cells.size(); ++k) {
            double v;
            if (!parse_double(cells[k], v))
                throw std::runtime_error(name + ": non-numeric cell at line " + std::to_string(line_no) +
                                         ", column " + std::to_string(k + 1));
            if (!std::isfinite(v))
                throw std::runtime_error(name + ": non-finite value at line " + std::to_string(line_no) +
                                         ", column " + std::to_string(k + 1));
            out.values.push_back(v);
        }
        ++out.n;
    }
    if (out.n == 0) throw std::runtime_error(name + ": no data rows");
    return out;
}

ObservationMatrix load_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return parse_matrix_csv(in, path.string());
}

void write_matrix_csv(const ObservationMatrix& m, std::ostream& os) {
    char buf[32];
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t k = 0; k < m.d; ++k) {
            if (k != 0) os << ',';
            auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), m.at(i, k));
            os.write(buf, p - buf);
        }
        os << '\n';
    }
}

void write_matrix_csv(const ObservationMatrix& m, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_matrix_csv(m, os);
    if (!os) throw std::runtime_error("failed writing " + path.string());
}

PriceTable PriceTable::parse_csv(std::istream& in, const std::string& name) {
    PriceTable table;
    std::string line;
    std::vector<std::string_view> cells;
    std::size_t line_no = 0;
    bool saw_first = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        split_cells(line, cells);

        if (!saw_first) {
            saw_first = true;
            bool numeric_or_missing = true;
            double v;
            for (auto cell : cells)
                if (!is_missing(cell) && !parse_double(cell, v)) numeric_or_missing = false;
            if (!numeric_or_missing) {
                for (auto cell : cells) table.assets.emplace_back(cell);
                continue;
            }
            for (std::size_t j = 0; j < cells.size(); ++j) table.assets.push_back("asset" + std::to_string(j + 1));
        }

        if (cells.size() != table.assets.size())
            throw std::runtime_error(name + ": ragged row at line " + std::to_string(line_no));
        for (std::size_t j = 0; j < cells.size(); ++j) {
            double v;
            if (is_missing(cells[j]))
                v = std::numeric_limits<double>::quiet_NaN();
            else if (!parse_double(cells[j], v))
                throw std::runtime_error(name + ": unreadable price at line " + std::to_string(line_no) +
                                         ", column " + std::to_string(j + 1));
            table.prices.push_back(v);
        }
        ++table.weeks;
    }
    if (table.weeks == 0) throw std::runtime_error(name + ": no price rows");
    return table;
}

PriceTable PriceTable::load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return parse_csv(in, path.string());
}

ReturnsResult prices_to_returns(const PriceTable& prices, bool drop_incomplete) {
    const std::size_t m = prices.assets.size();
    if (prices.weeks < 2) throw std::runtime_error("returns: need at least 2 price rows");

    std::vector<std::size_t> kept;
    ReturnsResult out;
    for (std::size_t j = 0; j < m; ++j) {
        bool complete = true;
        for (std::size_t t = 0; t < prices.weeks; ++t) {
            if (std::isnan(prices.at(t, j))) {
                complete = false;
                break;
            }
        }
        if (complete) {
            kept.push_back(j);
            out.kept_assets.push_back(prices.assets[j]);
        } else if (drop_incomplete) {
            out.dropped_assets.push_back(prices.assets[j]);
        } else {
            throw std::runtime_error("returns: asset " + prices.assets[j] +
                                     " has missing prices (enable drop_incomplete to exclude it)");
        }
    }
    if (kept.empty()) throw std::runtime_error("returns: no complete assets left");

    for (std::size_t j : kept) {
        for (std::size_t t = 0; t < prices.weeks; ++t) {
            if (!(prices.at(t, j) > 0.0))
                throw std::runtime_error("returns: non-positive price for asset " + prices.assets[j] +
                                         " at row " + std::to_string(t + 1));
        }
    }

    out.returns = ObservationMatrix(prices.weeks - 1, kept.size());
    for (std::size_t t = 1; t < prices.weeks; ++t) {
        for (std::size_t c = 0; c < kept.size(); ++c) {
            const std::size_t j = kept[c];
            out.returns.at(t - 1, c) = prices.at(t, j) / prices.at(t - 1, j) - 1.0;
        }
    }
    return out;
}

}  // namespace pdcp

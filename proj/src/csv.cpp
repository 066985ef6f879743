#include "fracstep/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "fracstep/error.hpp"

namespace fracstep::csv {

std::string format(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

std::size_t Table::column(std::string_view name) const {
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == name) {
            return c;
        }
    }
    throw IndexError("csv: no column '" + std::string(name) + "'");
}

std::optional<double> Table::number(std::size_t row, std::size_t col) const {
    const std::string& cell = rows.at(row).at(col);
    if (cell.empty()) {
        return std::nullopt;
    }
    if (cell == "nan") {
        return std::nan("");
    }
    if (cell == "inf" || cell == "-inf") {
        return cell[0] == '-' ? -HUGE_VAL : HUGE_VAL;
    }
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
        throw DomainError("csv: cell '" + cell + "' is not a number");
    }
    return v;
}

Writer::Writer(const std::vector<std::string>& header) { section(header); }

void Writer::separator() {
    if (row_open_) {
        text_ += ',';
    }
    row_open_ = true;
}

Writer& Writer::cell(double x) {
    separator();
    text_ += format(x);
    return *this;
}

Writer& Writer::cell(long long x) {
    separator();
    text_ += std::to_string(x);
    return *this;
}

Writer& Writer::cell(std::string_view t) {
    separator();
    text_ += t;
    return *this;
}

Writer& Writer::empty() {
    separator();
    return *this;
}

void Writer::end_row() {
    text_ += '\n';
    row_open_ = false;
}

void Writer::section(const std::vector<std::string>& header) {
    if (!text_.empty()) {
        text_ += '\n';
    }
    for (const auto& h : header) {
        cell(std::string_view(h));
    }
    end_row();
}

std::vector<Table> parse(std::string_view text) {
    std::vector<Table> tables;
    bool fresh = true;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = text.size();
        }
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        pos = eol + 1;
        if (line.empty()) {
            fresh = true;
            continue;
        }
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            cells.emplace_back(line.substr(start, comma - start));
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        if (fresh) {
            tables.push_back(Table{std::move(cells), {}});
            fresh = false;
        } else {
            tables.back().rows.push_back(std::move(cells));
        }
    }
    return tables;
}

std::vector<Table> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DomainError("csv: cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DomainError("cannot open " + tmp.string() + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw DomainError("write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw DomainError("cannot move output into " + path.string());
    }
}

}  // namespace fracstep::csv

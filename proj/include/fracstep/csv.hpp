#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fracstep::csv {

/// Shortest text that reads back to the same double.
std::string format(double x);

/// One header line followed by rows; cells are kept as text.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws IndexError if absent.
    std::size_t column(std::string_view name) const;
    /// Cell as double; an empty cell yields nullopt.
    std::optional<double> number(std::size_t row, std::size_t col) const;
};

/// Builds CSV text one row at a time.
class Writer {
public:
    explicit Writer(const std::vector<std::string>& header);

    Writer& cell(double x);
    Writer& cell(long long x);
    Writer& cell(std::string_view text);
    Writer& empty();
    void end_row();

    /// Starts a new section after a blank line.
    void section(const std::vector<std::string>& header);

    const std::string& text() const noexcept { return text_; }

private:
    void separator();

    std::string text_;
    bool row_open_ = false;
};

/// Splits text into blank-line separated tables.
std::vector<Table> parse(std::string_view text);
std::vector<Table> read_file(const std::filesystem::path& path);

/// Writes through a sibling temporary file and renames it into place, so the
/// target is untouched unless the whole write succeeds.
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace fracstep::csv

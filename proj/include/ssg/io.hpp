#pragma once

#include <stdexcept>
#include <string>

#include "ssg/model.hpp"

namespace ssg {

/// Malformed model text. line() is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Text format, one item per line, '#' starts a comment:
///
///     ssg 1
///     states N
///     initial I
///     goal I [I ...]
///     minimizer I [I ...]        (optional; other states are Maximizer)
///     action S LABEL
///       -> T P
///
/// Probabilities are written with 17 significant digits so parsing the
/// output reproduces the model exactly. parse_model throws ParseError on
/// syntax errors and ModelError when the model violates an invariant.
SsgModel parse_model(const std::string& text);
std::string serialize_model(const SsgModel& model);

SsgModel read_model_file(const std::string& path);
void write_model_file(const std::string& path, const SsgModel& model);

/// Resolves "kind:n[:m]" for the handcrafted families and "example" for the
/// small example game; anything else is read as a file path.
SsgModel load_model(const std::string& spec);

/// The four-state example game: s0 (Minimizer, action a to s1), s1
/// (Maximizer, b back to s0, c to f or z with 1/2 each), goal f, sink z.
SsgModel example_game();

}  // namespace ssg

#include "entqp/matrix_io.hpp"

#include "entqp/errors.hpp"
#include "entqp/numeric_format.hpp"

#include <json.hpp>

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace entqp::state_model {

namespace {

using json = nlohmann::json;

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

CoefficientMatrix<double> load_csv(std::istream& in) {
    std::string line;
    long row = 0;

    if (!std::getline(in, line))
        throw ParseError("matrix CSV: missing header line `dim,<d>`", 1, 1);
    ++row;
    auto header = split_fields(line);
    if (header.size() != 2 || trim(header[0]) != "dim")
        throw ParseError("matrix CSV: header must be `dim,<d>`", row, 1);
    double dim_value = 0;
    if (!parse_real(trim(header[1]), dim_value) || dim_value < 1 ||
        dim_value != static_cast<double>(static_cast<Eigen::Index>(dim_value)))
        throw ParseError("matrix CSV: dimension must be a positive integer", row, 2);
    const auto dim = static_cast<Eigen::Index>(dim_value);

    CoefficientMatrix<double> state;
    state.dim = dim;
    state.entries.resize(dim, dim);
    for (Eigen::Index m = 0; m < dim; ++m) {
        if (!std::getline(in, line))
            throw ParseError("matrix CSV: expected " + std::to_string(dim) + " entry rows", row + 1, 1);
        ++row;
        auto fields = split_fields(line);
        if (static_cast<Eigen::Index>(fields.size()) != dim)
            throw ParseError("matrix CSV: expected " + std::to_string(dim) + " fields", row,
                             static_cast<long>(fields.size()));
        for (Eigen::Index n = 0; n < dim; ++n) {
            double v = 0;
            if (!parse_real(fields[static_cast<size_t>(n)], v))
                throw ParseError("matrix CSV: malformed number", row, static_cast<long>(n) + 1);
            state.entries(m, n) = v;
        }
    }
    while (std::getline(in, line)) {
        ++row;
        if (!trim(line).empty())
            throw ParseError("matrix CSV: unexpected extra content", row, 1);
    }
    state.meta = StateMeta{std::nullopt, 0.0, StateSource::file};
    return state;
}

void text_position(std::string_view text, size_t byte, long& row, long& col) {
    row = 1;
    col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++row;
            col = 1;
        } else {
            ++col;
        }
    }
}

CoefficientMatrix<double> load_json(std::istream& in) {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        long row = 1, col = 1;
        text_position(text, e.byte > 0 ? e.byte - 1 : 0, row, col);
        throw ParseError("matrix JSON: malformed document", row, col);
    }

    if (!doc.is_object() || !doc.contains("dim") || !doc["dim"].is_number_integer() ||
        doc["dim"].get<long>() < 1)
        throw ValidationError("matrix JSON: \"dim\" must be a positive integer");
    const auto dim = static_cast<Eigen::Index>(doc["dim"].get<long>());

    if (!doc.contains("entries") || !doc["entries"].is_array() ||
        static_cast<Eigen::Index>(doc["entries"].size()) != dim)
        throw ValidationError("matrix JSON: \"entries\" must be an array of dim rows");
    CoefficientMatrix<double> state;
    state.dim = dim;
    state.entries.resize(dim, dim);
    for (Eigen::Index m = 0; m < dim; ++m) {
        const auto& jrow = doc["entries"][static_cast<size_t>(m)];
        if (!jrow.is_array() || static_cast<Eigen::Index>(jrow.size()) != dim)
            throw ValidationError("matrix JSON: row " + std::to_string(m) + " must hold dim numbers");
        for (Eigen::Index n = 0; n < dim; ++n) {
            const auto& cell = jrow[static_cast<size_t>(n)];
            if (!cell.is_number())
                throw ValidationError("matrix JSON: non-numeric entry at (" + std::to_string(m) +
                                      "," + std::to_string(n) + ")");
            state.entries(m, n) = cell.get<double>();
        }
    }

    StateMeta meta{std::nullopt, 0.0, StateSource::file};
    if (doc.contains("meta")) {
        const auto& jmeta = doc["meta"];
        if (!jmeta.is_object())
            throw ValidationError("matrix JSON: \"meta\" must be an object");
        if (jmeta.contains("zeta")) {
            if (!jmeta["zeta"].is_number())
                throw ValidationError("matrix JSON: meta.zeta must be a number");
            meta.zeta = jmeta["zeta"].get<double>();
        }
        if (jmeta.contains("sigma")) {
            if (!jmeta["sigma"].is_number())
                throw ValidationError("matrix JSON: meta.sigma must be a number");
            meta.sigma = jmeta["sigma"].get<double>();
        }
        if (jmeta.contains("source")) {
            if (!jmeta["source"].is_string())
                throw ValidationError("matrix JSON: meta.source must be a string");
            auto source = source_from_string(jmeta["source"].get<std::string>());
            if (!source)
                throw ValidationError("matrix JSON: meta.source must be tmsv, dephased_tmsv, or file");
            meta.source = *source;
        }
    }
    state.meta = meta;
    return state;
}

void save_csv(const CoefficientMatrix<double>& state, std::ostream& out) {
    std::string text = "dim," + std::to_string(state.dim) + "\n";
    for (Eigen::Index m = 0; m < state.dim; ++m) {
        for (Eigen::Index n = 0; n < state.dim; ++n) {
            if (n > 0)
                text += ',';
            append_real(text, state.entries(m, n));
        }
        text += '\n';
    }
    out << text;
}

void save_json(const CoefficientMatrix<double>& state, std::ostream& out) {
    std::string text = "{\n  \"dim\": " + std::to_string(state.dim) + ",\n  \"entries\": [\n";
    for (Eigen::Index m = 0; m < state.dim; ++m) {
        text += "    [";
        for (Eigen::Index n = 0; n < state.dim; ++n) {
            if (n > 0)
                text += ", ";
            append_real(text, state.entries(m, n));
        }
        text += m + 1 < state.dim ? "],\n" : "]\n";
    }
    text += "  ]";
    if (state.meta) {
        text += ",\n  \"meta\": {";
        if (state.meta->zeta) {
            text += "\"zeta\": ";
            append_real(text, *state.meta->zeta);
            text += ", ";
        }
        text += "\"sigma\": ";
        append_real(text, state.meta->sigma);
        text += ", \"source\": \"" + to_string(state.meta->source) + "\"}";
    }
    text += "\n}\n";
    out << text;
}

} // namespace

CoefficientMatrix<double> load_matrix(std::istream& in, MatrixFormat format) {
    CoefficientMatrix<double> state =
        format == MatrixFormat::csv ? load_csv(in) : load_json(in);
    validate(state);
    return state;
}

CoefficientMatrix<double> load_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string() + " for reading");
    return load_matrix(in, format_from_path(path));
}

void save_matrix(const CoefficientMatrix<double>& state, std::ostream& out, MatrixFormat format) {
    validate(state);
    if (format == MatrixFormat::csv)
        save_csv(state, out);
    else
        save_json(state, out);
    if (!out)
        throw Error("matrix write failed");
}

void save_matrix(const CoefficientMatrix<double>& state, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open " + path.string() + " for writing");
    save_matrix(state, out, format_from_path(path));
}

MatrixFormat format_from_path(const std::filesystem::path& path) {
    return path.extension() == ".json" ? MatrixFormat::json : MatrixFormat::csv;
}

} // namespace entqp::state_model

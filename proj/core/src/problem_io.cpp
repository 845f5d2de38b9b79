#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ep/problem_io.hpp"

namespace ep {

using json = nlohmann::ordered_json;

namespace {

json vector_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json matrix_json(const Matrix& m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Vector read_vector(const json& j, std::string_view what) {
    if (!j.is_array()) throw IoError(std::string(what) + ": expected an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return v;
}

Matrix read_matrix(const json& j, std::string_view what) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols) {
        throw IoError(std::string(what) + ": data length does not match rows * cols");
    }
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j2 = 0; j2 < cols; ++j2) m(i, j2) = data[i * cols + j2].get<double>();
    }
    return m;
}

json header(std::string_view kind) {
    return json{{"format", kProblemFormat}, {"kind", kind}};
}

} // namespace

std::string problem_to_json(const NashCournotInstance& inst) {
    const auto* poly = inst.set.as<Polyhedron>();
    if (!poly) throw InvalidArgument("nash-cournot instance must have a polyhedral set");
    const Vector ones = Vector::Ones(inst.m());

    json j = header("nash-cournot");
    j["seed"] = inst.seed;
    j["m"] = inst.m();
    j["l"] = inst.l();
    j["constants"] = {{"gamma", inst.constants.gamma}, {"L", inst.constants.L}};
    j["bifunction"] = {{"form", "<Px+Qy+q, y-x>"},
                       {"P", matrix_json(inst.f.P)},
                       {"Q", matrix_json(inst.f.Q)},
                       {"q", vector_json(inst.f.q)}};
    j["set"] = {{"type", "polyhedron"},
                {"A", matrix_json(poly->A)},
                {"b", vector_json(poly->b)},
                {"witness", vector_json(poly->witness)}};
    j["start"] = {{"x0", vector_json(ones)}, {"x1", vector_json(ones)}};
    j["spectrum"] = {{"Q_minus_P", vector_json(inst.t_eigenvalues)},
                     {"Q", vector_json(inst.q_eigenvalues)}};
    return j.dump(1) + "\n";
}

std::string problem_to_json(const IntegralVipInstance& inst) {
    json j = header("integral-vip");
    j["tau"] = inst.tau;
    j["grid_points"] = inst.points();
    j["grid"] = vector_json(inst.grid);
    j["weights"] = vector_json(*inst.weights);
    j["set"] = {{"type", "ball"}, {"radius", 1.0}, {"norm", "trapezoid-weighted L2"}};
    j["operator"] = "A(x)(t) = x(t) - sum_j w_j F(t,s_j) cos(x(s_j)) + g(t)";
    j["start"] = "t + 0.5 cos t";
    j["known_solution"] = "zero";
    return j.dump(1) + "\n";
}

std::string toy_problem_json(double x0, double x1) {
    json j = header("toy");
    j["dimension"] = 1;
    j["bifunction"] = "x(y-x)";
    j["constants"] = {{"gamma", 1.0}, {"L", 1.0}};
    j["start"] = {{"x0", json::array({x0})}, {"x1", json::array({x1})}};
    j["known_solution"] = json::array({0.0});
    return j.dump(1) + "\n";
}

ProblemFile parse_problem_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("problem file is not valid JSON: ") + e.what());
    }
    try {
        const auto format = j.at("format").get<std::string>();
        if (format != kProblemFormat) {
            throw IoError("unsupported problem format '" + format + "'");
        }
        const auto kind = j.at("kind").get<std::string>();

        if (kind == "nash-cournot") {
            const auto& bif = j.at("bifunction");
            QuadraticBifunction f{read_matrix(bif.at("P"), "P"), read_matrix(bif.at("Q"), "Q"),
                                  read_vector(bif.at("q"), "q")};
            const auto& set = j.at("set");
            auto C = FeasibleSet::polyhedron(read_matrix(set.at("A"), "A"),
                                             read_vector(set.at("b"), "b"),
                                             read_vector(set.at("witness"), "witness"));
            const auto& c = j.at("constants");
            AssumptionConstants constants{c.at("gamma").get<double>(), c.at("L").get<double>()};
            WeightedVector x0(read_vector(j.at("start").at("x0"), "x0"));
            WeightedVector x1(read_vector(j.at("start").at("x1"), "x1"));
            return ProblemFile{kind, j.at("seed").get<std::uint64_t>(),
                               ProblemInstance(kind, std::move(f), std::move(C), std::move(x0),
                                               std::move(x1), constants)};
        }
        if (kind == "integral-vip") {
            const auto inst = build_integral_vip(j.at("tau").get<double>());
            if (j.at("grid_points").get<Eigen::Index>() != inst.points()) {
                throw InvalidArgument("integral-vip: grid_points disagrees with tau");
            }
            return ProblemFile{kind, std::nullopt, inst.to_problem()};
        }
        if (kind == "toy") {
            const double x0 = j.at("start").at("x0").at(0).get<double>();
            const double x1 = j.at("start").at("x1").at(0).get<double>();
            return ProblemFile{kind, std::nullopt, make_toy_problem(x0, x1)};
        }
        throw IoError("unknown problem kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw IoError(std::string("problem file is missing or has malformed fields: ") + e.what());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

ProblemFile load_problem_file(const std::filesystem::path& path) {
    return parse_problem_json(read_text_file(path));
}

} // namespace ep

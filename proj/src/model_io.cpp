#include "miri/model_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "miri/errors.hpp"

namespace miri {

namespace {

constexpr const char* kMagic = "miri-velocity-field";
constexpr int kVersion = 1;

}  // namespace

void save_velocity_model(const std::string& path, const VelocityModel& model) {
    std::ostringstream out;
    out << kMagic << " " << kVersion << "\n";
    out << "dim " << model.dim << "\n";
    out << "activation "
        << (model.params.activation == Activation::Silu ? "silu" : "tanh") << "\n";
    out << "hidden";
    for (std::size_t h : model.params.shape.hidden) out << " " << h;
    out << "\n";
    out << "params " << model.params.parameter_count() << "\n";
    char buf[64];
    for (std::size_t l = 0; l < model.params.layer_count(); ++l) {
        for (double v : model.params.weights[l].storage()) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << buf << "\n";
        }
        for (double v : model.params.biases[l]) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << buf << "\n";
        }
    }

    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::trunc);
        if (!f) throw IoError("cannot open '" + tmp + "' for writing");
        f << out.str();
        if (!f) throw IoError("write failed for '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename '" + tmp + "' to '" + path + "'");
}

VelocityModel load_velocity_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");

    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != kMagic)
        throw ParseError("'" + path + "': not a velocity field checkpoint");
    if (version != kVersion)
        throw ParseError("'" + path + "': unsupported checkpoint version " +
                         std::to_string(version));

    std::string key;
    std::size_t dim = 0;
    if (!(in >> key >> dim) || key != "dim")
        throw ParseError("'" + path + "': missing dim header");

    std::string act_name;
    if (!(in >> key >> act_name) || key != "activation")
        throw ParseError("'" + path + "': missing activation header");
    Activation act;
    if (act_name == "silu")
        act = Activation::Silu;
    else if (act_name == "tanh")
        act = Activation::Tanh;
    else
        throw ParseError("'" + path + "': unknown activation '" + act_name + "'");

    if (!(in >> key) || key != "hidden")
        throw ParseError("'" + path + "': missing hidden header");
    std::vector<std::size_t> hidden;
    std::string rest;
    std::getline(in, rest);
    {
        std::istringstream hs(rest);
        std::size_t h;
        while (hs >> h) hidden.push_back(h);
    }

    std::size_t count = 0;
    if (!(in >> key >> count) || key != "params")
        throw ParseError("'" + path + "': missing params header");

    MlpShape shape;
    shape.input = 4 * dim + 1;
    shape.hidden = hidden;
    shape.output = dim;
    VelocityModel model;
    model.dim = dim;
    model.params = MlpParams::zeros(shape, act);
    if (model.params.parameter_count() != count)
        throw ParseError("'" + path + "': parameter count " + std::to_string(count) +
                         " does not match architecture");

    for (std::size_t l = 0; l < model.params.layer_count(); ++l) {
        for (double& v : model.params.weights[l].storage())
            if (!(in >> v)) throw ParseError("'" + path + "': truncated parameter block");
        for (double& v : model.params.biases[l])
            if (!(in >> v)) throw ParseError("'" + path + "': truncated parameter block");
    }
    return model;
}

}  // namespace miri

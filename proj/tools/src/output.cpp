#include "zkio/output.hpp"

#include <fstream>
#include <system_error>

#include <unistd.h>

namespace zkio {

namespace fs = std::filesystem;

void prepare_output_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw OutputError("cannot create output directory '" + dir.string() + "'");
    const fs::path probe = dir / (".zk_probe_" + std::to_string(::getpid()));
    {
        std::ofstream f(probe);
        if (!f) throw OutputError("output directory '" + dir.string() + "' is not writable");
    }
    fs::remove(probe, ec);
}

void write_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw OutputError("cannot write '" + tmp.string() + "'");
        f << content;
        f.flush();
        if (!f) throw OutputError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw OutputError("cannot rename into '" + path.string() + "'");
    }
}

}  // namespace zkio

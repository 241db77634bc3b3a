#pragma once

#include <algorithm>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mpiassist/embedded_data.hpp"
#include "mpiassist/util.hpp"

namespace mpiassist {

inline const std::vector<std::string>& core_mpi_names() {
    static const std::vector<std::string> kCore = {"MPI_Finalize", "MPI_Comm_rank", "MPI_Comm_size", "MPI_Init",
                                                   "MPI_Recv",     "MPI_Send",      "MPI_Reduce",    "MPI_Bcast"};
    return kCore;
}

class MpiInventory {
public:
    /// One name per line; blank lines and `#` comments are ignored.
    static MpiInventory from_text(std::string_view text) {
        MpiInventory inv;
        for (auto& line : split_lines(text)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            inv.all_names.push_back(line);
        }
        std::sort(inv.all_names.begin(), inv.all_names.end());
        inv.all_names.erase(std::unique(inv.all_names.begin(), inv.all_names.end()), inv.all_names.end());
        inv.core_names = core_mpi_names();
        return inv;
    }

    static MpiInventory from_file(const std::filesystem::path& path) { return from_text(read_file(path)); }

    static const MpiInventory& builtin() {
        static const MpiInventory inv = from_text(embedded::mpi_functions);
        return inv;
    }

    bool contains(std::string_view name) const {
        return std::binary_search(all_names.begin(), all_names.end(), name);
    }
    bool is_core(std::string_view name) const {
        return std::find(core_names.begin(), core_names.end(), name) != core_names.end();
    }

    std::vector<std::string> all_names;
    std::vector<std::string> core_names;
};

} // namespace mpiassist

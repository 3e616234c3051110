/*
   Copyright 2026 The s2nbar authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef S2NBAR_GRID_HPP
#define S2NBAR_GRID_HPP

#include <cassert>
#include <cstddef>
#include <vector>

namespace s2nbar {

/// Dense row-major 2-D array with value semantics.
template <typename T>
class grid2d {
   public:
    grid2d() = default;
    grid2d(std::size_t rows, std::size_t cols, T fill = T{})
        : _rows(rows), _cols(cols), _data(rows * cols, fill) {}

    std::size_t rows() const { return _rows; }
    std::size_t cols() const { return _cols; }
    std::size_t size() const { return _data.size(); }
    bool empty() const { return _data.empty(); }

    T& operator()(std::size_t r, std::size_t c) {
        assert(r < _rows && c < _cols);
        return _data[r * _cols + c];
    }
    const T& operator()(std::size_t r, std::size_t c) const {
        assert(r < _rows && c < _cols);
        return _data[r * _cols + c];
    }

    T* data() { return _data.data(); }
    const T* data() const { return _data.data(); }

    std::vector<T>& values() { return _data; }
    const std::vector<T>& values() const { return _data; }

    bool operator==(const grid2d&) const = default;

   private:
    std::size_t _rows = 0;
    std::size_t _cols = 0;
    std::vector<T> _data;
};

}  // namespace s2nbar

#endif

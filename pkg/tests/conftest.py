import pytest

from incrtree.rng_bits import BitSource


class ListBits(BitSource):
    """Bit source replaying a fixed bit string; raises when it runs dry."""

    class Exhausted(Exception):
        pass

    def __init__(self, bits):
        super().__init__(0)
        self._bits = [int(b) for b in bits]
        self._pos = 0

    def take(self, k):
        if k <= 0:
            return 0
        if self._pos + k > len(self._bits):
            raise ListBits.Exhausted
        out = 0
        for b in self._bits[self._pos:self._pos + k]:
            out = (out << 1) | b
        self._pos += k
        self.bits_consumed += k
        return out


@pytest.fixture
def list_bits():
    return ListBits

"""
JSON model documents.

A model document carries the algebra, the contact form, optional frame data
and optional connection and deformation tables, all with rational strings:

    {
      "name": "example2",
      "dimension": 5,
      "basis": ["E1", ..., "E5"],
      "brackets": [{"x": "E2", "y": "E3", "result": {"E1": "1"}}, ...],
      "alpha": {"E1": "1", "E4": "1"},
      "parameters": {"s": "1"},
      "frame": {"names": ["A1", ..., "xi"], "distribution": [{"E2": "1"}, ...]},
      "connection": {"frame": "adapted", "table": [{"x": "A1", "y": "A2", "result": {"A3": "1/3"}}]},
      "deformation": {"table": [...]}
    }

Tables read nabla_x y = sum result. In an adapted table, slot and result names
may also be algebra basis names; they are converted literally and the
conversion is recorded as a "symbol" ledger entry.
"""
import json
import logging
from dataclasses import dataclass, field

from .connection import ConnectionTable, DeformationTensor, Discrepancy, validate_deformation
from .exceptions import DocumentError
from .lie_contact import LieAlgebra, build_model
from .rational import ZERO, format_rational, parse_rational

logger = logging.getLogger(__name__)

FRAMES = ('original', 'adapted')


@dataclass(frozen=True)
class TableEntry:
    x: str
    y: str
    result: tuple  # (name, Fraction) pairs


@dataclass(frozen=True)
class ModelDocument:
    name: str
    basis: tuple
    brackets: tuple  # TableEntry
    alpha: tuple  # (name, Fraction)
    parameters: tuple = ()
    frame_names: tuple = None
    distribution: tuple = None  # tuples of (name, Fraction)
    connection_frame: str = None
    connection: tuple = None  # TableEntry
    deformation: tuple = None  # TableEntry

    @property
    def dimension(self):
        return len(self.basis)


# parsing

def _require(data, key, kind, path):
    if key not in data:
        raise DocumentError(f'missing field {key!r}', path)
    value = data[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise DocumentError(f'expected {kind.__name__}', f'{path}.{key}')
    return value


def _combination(data, names, path):
    if not isinstance(data, dict):
        raise DocumentError('expected an object of name -> rational', path)
    out = []
    for name, value in data.items():
        if name not in names:
            raise DocumentError(f'unknown name {name!r}', path)
        out.append((name, parse_rational(value, f'{path}.{name}')))
    return tuple(out)


def _table(items, slot_names, result_names, path):
    if not isinstance(items, list):
        raise DocumentError('expected a list', path)
    entries = []
    for index, item in enumerate(items):
        here = f'{path}[{index}]'
        if not isinstance(item, dict):
            raise DocumentError('expected an object', here)
        x = _require(item, 'x', str, here)
        y = _require(item, 'y', str, here)
        for key, value in (('x', x), ('y', y)):
            if value not in slot_names:
                raise DocumentError(f'unknown name {value!r}', f'{here}.{key}')
        if 'result' not in item:
            raise DocumentError("missing field 'result'", here)
        entries.append(TableEntry(x, y, _combination(item['result'], result_names, f'{here}.result')))
    return tuple(entries)


def parse_document(data):
    """
    Validate a decoded JSON object.

    Raises:
        DocumentError: with the path of the offending field
    """
    if not isinstance(data, dict):
        raise DocumentError('expected an object', '$')
    name = _require(data, 'name', str, '$')
    dimension = _require(data, 'dimension', int, '$')
    basis = _require(data, 'basis', list, '$')
    if not all(isinstance(b, str) for b in basis) or len(set(basis)) != len(basis):
        raise DocumentError('basis names must be distinct strings', '$.basis')
    if dimension != len(basis):
        raise DocumentError(f'dimension {dimension} does not match {len(basis)} basis names', '$.dimension')
    basis = tuple(basis)
    brackets = _table(_require(data, 'brackets', list, '$'), basis, basis, '$.brackets')
    alpha = _combination(_require(data, 'alpha', dict, '$'), basis, '$.alpha')
    parameters = ()
    if 'parameters' in data:
        raw = _require(data, 'parameters', dict, '$')
        parameters = tuple((k, parse_rational(v, f'$.parameters.{k}')) for k, v in raw.items())

    frame_names = distribution = None
    if 'frame' in data:
        frame = _require(data, 'frame', dict, '$')
        frame_names = _require(frame, 'names', list, '$.frame')
        if len(frame_names) != dimension or not all(isinstance(n, str) for n in frame_names):
            raise DocumentError(f'expected {dimension} frame names', '$.frame.names')
        frame_names = tuple(frame_names)
        vectors = _require(frame, 'distribution', list, '$.frame')
        if len(vectors) != dimension - 1:
            raise DocumentError(f'expected {dimension - 1} distribution vectors', '$.frame.distribution')
        distribution = tuple(
            _combination(v, basis, f'$.frame.distribution[{i}]') for i, v in enumerate(vectors)
        )

    names = basis + (frame_names or _default_frame_names(dimension))
    connection_frame = connection = None
    if 'connection' in data:
        block = _require(data, 'connection', dict, '$')
        connection_frame = block.get('frame', 'adapted')
        if connection_frame not in FRAMES:
            raise DocumentError(f'frame must be one of {FRAMES}', '$.connection.frame')
        slot_names = basis if connection_frame == 'original' else names
        connection = _table(_require(block, 'table', list, '$.connection'), slot_names, slot_names,
                            '$.connection.table')
    deformation = None
    if 'deformation' in data:
        block = _require(data, 'deformation', dict, '$')
        deformation = _table(_require(block, 'table', list, '$.deformation'), names, names,
                             '$.deformation.table')

    return ModelDocument(
        name=name, basis=basis, brackets=brackets, alpha=alpha, parameters=parameters,
        frame_names=frame_names, distribution=distribution, connection_frame=connection_frame,
        connection=connection, deformation=deformation,
    )


def loads(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f'invalid JSON: {exc.msg} (line {exc.lineno})', '$') from exc
    return parse_document(data)


def load(path):
    try:
        with open(path, encoding='utf-8') as handle:
            text = handle.read()
    except OSError as exc:
        raise DocumentError(f'cannot read {path}: {exc.strerror}', '$') from exc
    return loads(text)


# emitting

def _emit_combination(pairs):
    return {name: format_rational(value) for name, value in pairs}


def _emit_table(entries):
    return [{'x': e.x, 'y': e.y, 'result': _emit_combination(e.result)} for e in entries]


def to_data(document):
    data = {
        'name': document.name,
        'dimension': document.dimension,
        'basis': list(document.basis),
        'brackets': _emit_table(document.brackets),
        'alpha': _emit_combination(document.alpha),
        'parameters': _emit_combination(document.parameters),
    }
    if document.frame_names is not None:
        data['frame'] = {
            'names': list(document.frame_names),
            'distribution': [_emit_combination(v) for v in document.distribution],
        }
    if document.connection is not None:
        data['connection'] = {'frame': document.connection_frame, 'table': _emit_table(document.connection)}
    if document.deformation is not None:
        data['deformation'] = {'table': _emit_table(document.deformation)}
    return data


def dumps(document):
    """Canonical serialization: fixed key order, two-space indent, trailing newline."""
    return json.dumps(to_data(document), indent=2, ensure_ascii=False) + '\n'


# building

def _default_frame_names(dimension):
    return tuple(f'A{i + 1}' for i in range(dimension - 1)) + ('xi',)


def _vector(pairs, basis):
    out = [ZERO] * len(basis)
    for name, value in pairs:
        out[basis.index(name)] += value
    return tuple(out)


def build(document):
    """ContactModel of a document."""
    algebra = LieAlgebra.from_brackets(
        document.basis, [(e.x, e.y, dict(e.result)) for e in document.brackets])
    alpha = _vector(document.alpha, document.basis)
    distribution = None
    if document.distribution is not None:
        distribution = [_vector(v, document.basis) for v in document.distribution]
    return build_model(
        algebra, alpha,
        parameters=dict(document.parameters),
        distribution=distribution,
        frame_names=document.frame_names,
        name=document.name,
    )


def _scalar_multiple(model, name):
    """(index, c) with name = c * A_index, for a frame or algebra name."""
    coordinates = model.resolve(name)
    support = [i for i, v in enumerate(coordinates) if v]
    if len(support) != 1:
        raise DocumentError(f'{name} is not a multiple of a frame vector', '$.connection.table')
    return support[0], coordinates[support[0]]


@dataclass
class _TableBuilder:
    model: object
    ledger: list = field(default_factory=list)

    def adapted(self, entries, rank_only=False):
        model = self.model
        dim = model.dimension
        names = model.frame.names
        gamma = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
        for entry in entries:
            i, cx = _scalar_multiple(model, entry.x)
            j, cy = _scalar_multiple(model, entry.y)
            for symbol, value in entry.result:
                vec = model.resolve(symbol)
                scale = value / (cx * cy)
                for k, v in enumerate(vec):
                    if v:
                        gamma[i][j][k] += scale * v
                if symbol not in names or entry.x not in names or entry.y not in names:
                    self.ledger.append(Discrepancy(entry.x, entry.y, symbol, value, scale, 'symbol'))
                    logger.warning('%s: read nabla_%s %s with %s literally as nabla_%s %s',
                                   model.name, entry.x, entry.y, symbol, names[i], names[j])
        if rank_only and any(gamma[i][j][k] for i in range(dim) for j in range(dim) for k in range(dim)
                             if dim - 1 in (i, j, k)):
            raise DocumentError('deformation entries must stay in the distribution', '$.deformation.table')
        return gamma

    def original(self, entries):
        """Convert a table in algebra coordinates to the adapted frame."""
        model = self.model
        algebra = model.algebra
        dim = model.dimension
        raw = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
        for entry in entries:
            a, b = algebra.index(entry.x), algebra.index(entry.y)
            for name, value in entry.result:
                raw[a][b][algebra.index(name)] += value
        columns = [model.frame.column(i) for i in range(dim)]
        gamma = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
        for i in range(dim):
            for j in range(dim):
                total = [ZERO] * dim
                for a, pa in enumerate(columns[i]):
                    if not pa:
                        continue
                    for b, pb in enumerate(columns[j]):
                        if not pb:
                            continue
                        for c, v in enumerate(raw[a][b]):
                            if v:
                                total[c] += pa * pb * v
                gamma[i][j] = list(model.frame.to_frame(tuple(total)))
        return gamma


def connection_table(model, document):
    """
    The connection of a document in the adapted frame, before repair.

    Returns:
        (ConnectionTable or None, tuple of symbol Discrepancy entries)
    """
    if document.connection is None:
        return None, ()
    builder = _TableBuilder(model)
    if document.connection_frame == 'original':
        gamma = builder.original(document.connection)
    else:
        gamma = builder.adapted(document.connection)
    return ConnectionTable.from_nested(gamma), tuple(builder.ledger)


def deformation_tensor(model, document):
    if document.deformation is None:
        return None
    gamma = _TableBuilder(model).adapted(document.deformation, rank_only=True)
    d = model.rank
    S = DeformationTensor(tuple(tuple(tuple(gamma[i][j][:d]) for j in range(d)) for i in range(d)))
    validate_deformation(model, S)
    return S


def table_entries(model, gamma, rank_only=False):
    """Sparse adapted-frame entries of a table, in index order."""
    names = model.frame.names
    size = model.rank if rank_only else model.dimension
    rows = gamma.gamma if hasattr(gamma, 'gamma') else gamma.s3
    entries = []
    for i in range(size):
        for j in range(size):
            result = tuple((names[k], v) for k, v in enumerate(rows[i][j]) if v)
            if result:
                entries.append(TableEntry(names[i], names[j], result))
    return tuple(entries)

"""
Ingesta de conjuntos de datos, normalización de calificaciones y particiones
"""
import csv
import logging
import os
import re

import numpy as np
import pandas as pd

from config.settings import (LASTFM_AGE_BINS, LASTFM_GENDERS, MOVIELENS_AGE_CODES,
                             MOVIELENS_GENDERS, MOVIELENS_OCCUPATIONS, SPLIT_TAGS)
from models.rating_store import MISSING, AttributeTable, RatingStore
from utils.exceptions import (DataFormatError, MissingDataError, MissingFileError,
                              NonPositivePlayCountError, ParamInvalidError,
                              UnknownAgeCodeError, ValidationError)
from utils.validators import SplitValidator

logger = logging.getLogger(__name__)


def _check_file(path):
    if not path or not os.path.isfile(path):
        raise MissingFileError(f"No se encontró el archivo: {path}")


def _read_movielens_lines(path, field_count):
    """Generar (número de línea, campos) de un archivo separado por '::'"""
    _check_file(path)
    with open(path, 'r', encoding='latin-1') as f:
        for line_number, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split('::')
            if len(fields) != field_count:
                raise DataFormatError(
                    f"se esperaban {field_count} campos separados por '::', hay {len(fields)}", line_number
                )
            yield line_number, fields


def parse_movielens(ratings_path, users_path):
    """
    Leer ratings.dat y users.dat de MovieLens-1M

    Args:
        ratings_path (str): UserID::MovieID::Rating::Timestamp
        users_path (str): UserID::Gender::Age::Occupation::Zip

    Returns:
        tuple: (RatingStore, AttributeTable) con índices internos densos base 0
    """
    raw_users, raw_items, raw_ratings = [], [], []
    seen = set()
    for line_number, fields in _read_movielens_lines(ratings_path, 4):
        try:
            user_id, movie_id, rating = int(fields[0]), int(fields[1]), float(fields[2])
            int(fields[3])
        except ValueError:
            raise DataFormatError("campos numéricos inválidos", line_number)
        if not 1.0 <= rating <= 5.0:
            raise DataFormatError(f"calificación fuera de [1,5]: {rating}", line_number)
        if (user_id, movie_id) in seen:
            raise DataFormatError(f"par duplicado ({user_id}, {movie_id})", line_number)
        seen.add((user_id, movie_id))
        raw_users.append(user_id)
        raw_items.append(movie_id)
        raw_ratings.append(rating)

    if not raw_ratings:
        raise MissingDataError(f"El archivo de calificaciones está vacío: {ratings_path}")

    profiles = {}
    for line_number, fields in _read_movielens_lines(users_path, 5):
        try:
            user_id, age_code, occupation = int(fields[0]), int(fields[2]), int(fields[3])
        except ValueError:
            raise DataFormatError("campos numéricos inválidos", line_number)
        gender = fields[1].strip().upper()
        if gender not in MOVIELENS_GENDERS:
            raise DataFormatError(f"género desconocido: {fields[1]}", line_number)
        if age_code not in MOVIELENS_AGE_CODES:
            raise UnknownAgeCodeError(f"código de edad desconocido: {age_code}", line_number)
        if not 0 <= occupation < MOVIELENS_OCCUPATIONS:
            raise DataFormatError(f"ocupación fuera de rango: {occupation}", line_number)
        profiles[user_id] = (MOVIELENS_GENDERS[gender], MOVIELENS_AGE_CODES[age_code], occupation)

    user_ids = sorted(set(raw_users) | set(profiles))
    item_ids = sorted(set(raw_items))
    user_index = {uid: i for i, uid in enumerate(user_ids)}
    item_index = {mid: i for i, mid in enumerate(item_ids)}

    store = RatingStore(
        len(user_ids), len(item_ids),
        [user_index[u] for u in raw_users],
        [item_index[v] for v in raw_items],
        raw_ratings,
        np.full(len(raw_ratings), SPLIT_TAGS['TRAIN']),
        user_ids, item_ids
    )

    values = np.full((len(user_ids), 3), MISSING, dtype=np.int64)
    for uid, labels in profiles.items():
        values[user_index[uid]] = labels
    missing = int(np.sum(values[:, 0] == MISSING))
    if missing:
        logger.warning(f"{missing} usuarios de MovieLens sin perfil demográfico")
    attributes = AttributeTable(
        ('gender', 'age', 'occupation'),
        (len(MOVIELENS_GENDERS), len(MOVIELENS_AGE_CODES), MOVIELENS_OCCUPATIONS),
        values
    )
    logger.info(f"MovieLens: {store.user_count} usuarios, {store.item_count} ítems, {len(store)} calificaciones")
    return store, attributes


def log_normalize_plays(counts):
    """
    Llevar conteos de reproducciones a calificaciones en [1, 5]

    r_c = 1 + 4 (ln(1+c) - m) / (Mx - m), con m y Mx el mínimo y máximo de ln(1+c).

    Args:
        counts (array-like): Conteos enteros positivos

    Returns:
        np.ndarray: Calificaciones normalizadas
    """
    counts = np.asarray(counts, dtype=np.float64)
    if counts.size == 0:
        return counts
    if np.any(~np.isfinite(counts)) or np.any(counts < 1):
        raise NonPositivePlayCountError("Los conteos de reproducciones deben ser >= 1")
    logs = np.log1p(counts)
    low, high = logs.min(), logs.max()
    if high - low <= 0.0:
        logger.warning("Todos los conteos son iguales; se asigna la calificación media 3.0")
        return np.full(counts.shape, 3.0)
    return np.clip(1.0 + 4.0 * (logs - low) / (high - low), 1.0, 5.0)


def _lastfm_age_class(age):
    if age < LASTFM_AGE_BINS[0]:
        return 0
    if age < LASTFM_AGE_BINS[1]:
        return 1
    return 2


def _read_lastfm_tsv(path, names):
    """Leer un TSV de Lastfm como texto; los errores de pandas pasan a DataFormatError"""
    try:
        return pd.read_csv(
            path, sep='\t', header=None, names=names,
            quoting=csv.QUOTE_NONE, dtype=str, keep_default_na=False, encoding='utf-8'
        )
    except pd.errors.EmptyDataError:
        return pd.DataFrame(columns=names)
    except pd.errors.ParserError as e:
        match = re.search(r'line (\d+)', str(e))
        line_number = int(match.group(1)) if match else None
        raise DataFormatError(f"TSV mal formado en {path}: {e}", line_number) from e
    except (UnicodeDecodeError, ValueError) as e:
        raise DataFormatError(f"No se pudo leer {path}: {e}") from e


def parse_lastfm(plays_path, profile_path):
    """
    Leer el volcado de Lastfm-360K (reproducciones y perfiles)

    Args:
        plays_path (str): usuario, artista-mbid, nombre de artista, reproducciones (TSV)
        profile_path (str): usuario, género, edad, país, fecha de registro (TSV)

    Returns:
        tuple: (RatingStore, AttributeTable)
    """
    _check_file(plays_path)
    _check_file(profile_path)

    plays = _read_lastfm_tsv(plays_path, ['user', 'artist_id', 'artist_name', 'plays'])
    if plays.empty:
        raise MissingDataError(f"El archivo de reproducciones está vacío: {plays_path}")
    counts = pd.to_numeric(plays['plays'], errors='coerce')
    if counts.isna().any() or (counts < 1).any():
        bad = int(np.flatnonzero(counts.isna().to_numpy() | (counts < 1).to_numpy())[0]) + 1
        raise NonPositivePlayCountError("conteo de reproducciones no positivo", bad)
    plays['plays'] = counts
    plays['artist'] = plays['artist_id'].where(plays['artist_id'] != '', plays['artist_name'])
    merged = plays.groupby(['user', 'artist'], sort=True)['plays'].sum().reset_index()

    user_ids = sorted(merged['user'].unique())
    item_ids = sorted(merged['artist'].unique())
    user_index = pd.Series(np.arange(len(user_ids)), index=user_ids)
    item_index = pd.Series(np.arange(len(item_ids)), index=item_ids)

    store = RatingStore(
        len(user_ids), len(item_ids),
        user_index[merged['user']].to_numpy(),
        item_index[merged['artist']].to_numpy(),
        log_normalize_plays(merged['plays'].to_numpy()),
        np.full(len(merged), SPLIT_TAGS['TRAIN']),
        user_ids, item_ids
    )

    profile = _read_lastfm_tsv(profile_path, ['user', 'gender', 'age', 'country', 'signup'])
    values = np.full((len(user_ids), 2), MISSING, dtype=np.int64)
    for row in profile.itertuples(index=False):
        position = user_index.get(row.user)
        if position is None:
            continue
        gender = LASTFM_GENDERS.get(str(row.gender).strip().lower())
        if gender is not None:
            values[position, 0] = gender
        try:
            age = int(float(row.age))
        except ValueError:
            continue
        if age >= 1:
            values[position, 1] = _lastfm_age_class(age)

    excluded = int(np.sum(np.any(values == MISSING, axis=1)))
    logger.info(
        f"Lastfm: {store.user_count} usuarios, {store.item_count} artistas, {len(store)} calificaciones; "
        f"{excluded} usuarios con género o edad faltante"
    )
    return store, AttributeTable(('gender', 'age'), (2, 3), values)


def split_ratings(store, ratios, seed):
    """
    Asignar cada tripleta a una partición de forma uniforme y reproducible

    Args:
        store (RatingStore): Tienda de calificaciones
        ratios (list): (train, test) o (train, validation, test)
        seed (int): Semilla

    Returns:
        RatingStore: Copia con etiquetas de partición
    """
    ratios = SplitValidator().validar_proporciones(ratios)
    tags = ([SPLIT_TAGS['TRAIN'], SPLIT_TAGS['TEST']] if len(ratios) == 2
            else [SPLIT_TAGS['TRAIN'], SPLIT_TAGS['VALIDATION'], SPLIT_TAGS['TEST']])

    n = len(store)
    order = np.random.default_rng(seed).permutation(n)
    bounds = np.round(np.cumsum(ratios) * n).astype(np.int64)
    bounds[-1] = n
    splits = np.empty(n, dtype=np.int8)
    start = 0
    for tag, end in zip(tags, bounds):
        splits[order[start:end]] = tag
        start = end
    result = store.with_splits(splits)
    logger.info(f"Partición {ratios}: {result.split_counts()}")
    return result


def carve_validation(store, fraction, seed):
    """Mover una fracción aleatoria de train a validation"""
    if not 0.0 <= fraction < 1.0:
        raise ValidationError("La fracción de validación debe estar en [0, 1)")
    train = np.flatnonzero(store.splits == SPLIT_TAGS['TRAIN'])
    count = int(round(fraction * len(train)))
    if count == 0:
        return store
    chosen = np.random.default_rng(seed).choice(train, size=count, replace=False)
    splits = store.splits.copy()
    splits[chosen] = SPLIT_TAGS['VALIDATION']
    logger.info(f"Se separaron {count} tripletas de train como validación interna")
    return store.with_splits(splits)


def generate_synthetic(users, items, density, cardinalities, strength, seed, rank=8, noise=0.3,
                       bias=0.15, taste=0.1):
    """
    Generar calificaciones de bajo rango con atributos plantados

    Cada atributo aporta una coordenada latente z_uk = strength * nivel(clase)
    + sqrt(1 - strength^2) * ruido, con niveles equiespaciados en [-1, 1].
    Todos los ítems cargan `bias` sobre esas coordenadas, de modo que la clase
    desplaza de forma consistente las calificaciones del usuario. Las otras
    `rank` coordenadas son gustos de media cero con desviación total `taste`.

    Args:
        users (int): Número de usuarios
        items (int): Número de ítems
        density (float): Fracción de ítems calificados por usuario
        cardinalities (list): Clases de cada atributo plantado
        strength (float): Correlación en [0, 1]
        seed (int): Semilla
        rank (int): Dimensión de los gustos
        noise (float): Desviación del ruido de calificación
        bias (float): Desplazamiento de calificación por unidad de atributo
        taste (float): Desviación de la parte de gustos

    Returns:
        tuple: (RatingStore sin particionar, AttributeTable)
    """
    if users < 1 or items < 1 or rank < 1:
        raise ParamInvalidError("users, items y rank deben ser positivos")
    if not 0.0 < density <= 1.0:
        raise ParamInvalidError("density debe estar en (0, 1]")
    if not 0.0 <= strength <= 1.0:
        raise ParamInvalidError("strength debe estar en [0, 1]")
    if not cardinalities or any(c < 2 for c in cardinalities):
        raise ParamInvalidError("Cada atributo plantado necesita al menos 2 clases")
    if noise < 0 or bias < 0 or taste < 0:
        raise ParamInvalidError("noise, bias y taste deben ser no negativos")

    rng = np.random.default_rng(seed)
    labels = np.stack([rng.integers(0, c, size=users) for c in cardinalities], axis=1)
    planted = np.empty((users, len(cardinalities)))
    for k, c in enumerate(cardinalities):
        levels = np.linspace(-1.0, 1.0, c)
        planted[:, k] = strength * levels[labels[:, k]] + np.sqrt(1.0 - strength ** 2) * rng.standard_normal(users)
    user_factors = np.hstack([planted, rng.standard_normal((users, rank))])
    item_factors = np.hstack([
        np.full((items, len(cardinalities)), bias / np.sqrt(len(cardinalities))),
        rng.standard_normal((items, rank)) * (taste / np.sqrt(rank))
    ])

    per_user = max(1, int(round(density * items)))
    rated = [np.sort(rng.choice(items, size=per_user, replace=False)) for _ in range(users)]
    user_column = np.repeat(np.arange(users), per_user)
    item_column = np.concatenate(rated)
    scores = np.einsum('ij,ij->i', user_factors[user_column], item_factors[item_column])
    raw = 3.0 + scores + noise * rng.standard_normal(len(scores))
    ratings = np.clip(raw, 1.0, 5.0)
    clipped = float(np.mean(raw != ratings))
    if clipped > 0.01:
        logger.warning(f"Datos sintéticos: {clipped:.1%} de las calificaciones quedaron recortadas a [1, 5]")

    store = RatingStore(
        users, items, user_column, item_column, ratings,
        np.full(len(ratings), SPLIT_TAGS['TRAIN']),
        range(users), range(items)
    )
    attributes = AttributeTable([f"planted_{k}" for k in range(len(cardinalities))], cardinalities, labels)
    logger.info(
        f"Datos sintéticos: {users} usuarios, {items} ítems, {len(ratings)} calificaciones, fuerza {strength}"
    )
    return store, attributes

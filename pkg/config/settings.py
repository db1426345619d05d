"""
Configuraciones generales de FairGo
"""
import os
from dotenv import load_dotenv

# Cargar variables de entorno
load_dotenv()

# Configuración de la aplicación
APP_CONFIG = {
    'name': 'FairGo',
    'version': '1.0.0',
    'author': 'Equipo de Desarrollo',
    'description': 'Filtrado justo de embeddings usuario-ítem y auditoría de fugas de atributos'
}

# Configuración de logging
LOGGING_CONFIG = {
    'level': os.getenv('FAIRGO_LOG_LEVEL', 'INFO'),
    'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    'color_format': '%(log_color)s%(asctime)s - %(name)s - %(levelname)s%(reset)s - %(message)s',
    'file': os.getenv('FAIRGO_LOG_FILE', 'logs/fairgo.log')
}

# Hilos de BLAS/OpenMP (None = sin límite)
RUNTIME_CONFIG = {
    'threads': int(os.getenv('FAIRGO_THREADS')) if os.getenv('FAIRGO_THREADS') else None
}

# Etiquetas de partición
SPLIT_TAGS = {
    'TRAIN': 0,
    'VALIDATION': 1,
    'TEST': 2
}

SPLIT_NAMES = {
    0: 'train',
    1: 'validation',
    2: 'test'
}

# Códigos de edad de MovieLens-1M (7 clases)
MOVIELENS_AGE_CODES = {1: 0, 18: 1, 25: 2, 35: 3, 45: 4, 50: 5, 56: 6}
MOVIELENS_GENDERS = {'F': 0, 'M': 1}
MOVIELENS_OCCUPATIONS = 21

# Bins de edad de Lastfm: [1,24], [25,34], [35, inf)
LASTFM_AGE_BINS = (25, 35)
LASTFM_GENDERS = {'f': 0, 'm': 1}

# Configuración de formatos de artefactos
ARTIFACT_CONFIG = {
    'format_version': 1,
    'checkpoint_format': 'fairgo-checkpoint',
    'manifest_file': 'manifest.json',
    'lock_file': '.fairgo.lock',
    'stages': ('ingest', 'train-base', 'train-fair', 'audit', 'report')
}

# Configuración del conjunto de datos
DATASET_CONFIG = {
    'DATASET_NAME': 'synthetic',
    'RATINGS_PATH': '',
    'USERS_PATH': '',
    'SPLIT_RATIOS': '0.9,0.1',
    'VALIDATION_CARVE': '0.05',
    'ATTRIBUTES': ''
}

# Configuración de los modelos base (PMF / GCN)
BASE_MODEL_CONFIG = {
    'BASE_MODEL': 'pmf',
    'EMBEDDING_DIM': '64',
    'BASE_EPOCHS': '30',
    'BASE_BATCH_SIZE': '1024',
    'BASE_LR': '0.005',
    'BASE_L2': '1e-4',
    'GCN_LAYERS': '2'
}

# Configuración del entrenamiento adversarial
FAIR_CONFIG = {
    'FAIR_LAMBDA': '0.1',
    'FAIR_EPOCHS': '20',
    'FAIR_BATCH_SIZE': '1024',
    'FILTER_LR': '0.005',
    'DISCRIMINATOR_LR': '0.005',
    'DISCRIMINATOR_STEPS': '3',
    'DISCRIMINATOR_WARMUP': '100',
    'WARMUP_USERS': '4096',
    'FILTER_HIDDEN': '128,64',
    'DISCRIMINATOR_HIDDEN': '16,8',
    'LEAKY_SLOPE': '0.01',
    'SUMMARY_VARIANT': 'first_order',
    'SUMMARY_ORDER': '1',
    'SUMMARY_WEIGHTS': '4,1',
    'AGGREGATION_HIDDEN': '',
    'NEIGHBOR_CAP': '512'
}

# Configuración de la auditoría
EVAL_CONFIG = {
    'ATTACKER_SEEDS': '0,1,2,3,4',
    'ATTACKER_EPOCHS': '500',
    'ATTACKER_LR': '0.01',
    'AUDIT_ORDERS': '3',
    'GROUP_METRICS': 'true',
    'GROUP_STATS_CSV': 'false',
    'REPORT_PDF': 'false'
}

# Configuración del generador sintético
SYNTHETIC_CONFIG = {
    'SYNTH_USERS': '500',
    'SYNTH_ITEMS': '300',
    'SYNTH_DENSITY': '0.05',
    'SYNTH_CARDINALITIES': '2',
    'SYNTH_STRENGTH': '1.0',
    'SYNTH_RANK': '8',
    'SYNTH_NOISE': '0.3',
    'SYNTH_BIAS': '0.15',
    'SYNTH_TASTE': '0.1'
}

# Configuración global de la corrida
RUN_CONFIG = {
    'SEED': '2021',
    'OUTPUT_DIR': 'runs/default'
}

# Valores por conjunto de datos
DATASET_PRESETS = {
    'movielens': {
        'SPLIT_RATIOS': '0.9,0.1',
        'ATTRIBUTES': 'gender,age,occupation',
        'FAIR_LAMBDA': '0.1',
        'FILTER_HIDDEN': '128,64',
        'DISCRIMINATOR_HIDDEN': '16,8'
    },
    'lastfm': {
        'SPLIT_RATIOS': '0.7,0.1,0.2',
        'VALIDATION_CARVE': '0',
        'ATTRIBUTES': 'gender,age',
        'FAIR_LAMBDA': '0.2',
        'FILTER_HIDDEN': '128,64,32',
        'DISCRIMINATOR_HIDDEN': '16,8,4'
    },
    'synthetic': {
        'SPLIT_RATIOS': '0.7,0.1,0.2',
        'VALIDATION_CARVE': '0',
        'ATTRIBUTES': ''
    }
}

# Pesos de agregación de valores por modelo base (lambda_1 : lambda_2)
SUMMARY_WEIGHT_PRESETS = {
    'pmf': '4,1',
    'gcn': '1,1'
}

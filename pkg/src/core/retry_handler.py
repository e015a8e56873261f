# src/core/retry_handler.py
"""
Retry Handler - Toolkit de Redes Perturbadas
Re-executa computações de janela quando a auditoria de margem falha

- Estratégia customizada (decide por exceção e tentativa)
- Estratégia de domínio: dobra a margem em MarginInsufficient
- Logging detalhado de tentativas
"""

import logging
from functools import wraps
from typing import Any, Callable

from .errors import MarginInsufficient

logger = logging.getLogger(__name__)


def retry_with_custom_strategy(
    should_retry: Callable[[Exception, int], bool],
    adjust_kwargs: Callable[[dict, Exception, int], dict],
    max_retries: int = 3
):
    """
    Decorator para retry com estratégia customizada

    Args:
        should_retry: Função (exception, attempt) -> bool que decide se deve tentar novamente
        adjust_kwargs: Função (kwargs, exception, attempt) -> kwargs da próxima tentativa
        max_retries: Número máximo de tentativas

    Example:
        @retry_with_custom_strategy(
            lambda e, n: isinstance(e, MarginInsufficient),
            lambda kw, e, n: {**kw, 'margin': 2 * kw['margin']},
        )
        def build(realization_factory, margin): ...
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs) -> Any:
            attempt = 0
            last_exception = None

            while attempt <= max_retries:
                try:
                    result = func(*args, **kwargs)
                    if attempt > 0:
                        logger.info(f"{func.__name__} succeeded after {attempt + 1} attempts")
                    return result

                except Exception as e:
                    last_exception = e

                    if attempt < max_retries and should_retry(e, attempt):
                        kwargs = adjust_kwargs(dict(kwargs), e, attempt)
                        logger.warning(
                            f"{func.__name__} failed (attempt {attempt + 1}): {e}. Retrying..."
                        )
                        attempt += 1
                    else:
                        if should_retry(e, attempt):
                            logger.error(f"{func.__name__} failed: {e}")
                        break

            raise last_exception

        return wrapper
    return decorator


# Estratégia pré-definida para as computações de janela

def retry_with_margin_doubling(max_retries: int = 3):
    """
    Retry para computações que dependem da margem da janela estendida

    A função decorada deve receber `margin` como argumento nomeado.
    A cada MarginInsufficient a margem é dobrada (até max_retries vezes).
    """
    def should_retry(error: Exception, attempt: int) -> bool:
        return isinstance(error, MarginInsufficient)

    def double_margin(kwargs: dict, error: Exception, attempt: int) -> dict:
        kwargs['margin'] = 2 * int(kwargs['margin'])
        logger.info(f"Margin doubled to {kwargs['margin']}", extra={'margin': kwargs['margin']})
        return kwargs

    return retry_with_custom_strategy(should_retry, double_margin, max_retries=max_retries)

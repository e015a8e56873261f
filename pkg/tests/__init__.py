# tests/__init__.py
"""
Test Suite - Sistema RAG Cativa Textil
"""
